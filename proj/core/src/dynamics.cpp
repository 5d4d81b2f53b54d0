#include "chansim/dynamics.hpp"

#include <cmath>
#include <stdexcept>

#include "chansim/constants.hpp"

namespace chansim {

namespace {

struct Deriv {
    double dx, dy, dpx, dpy;
};

inline Deriv rhs(const PotentialField& field, double x, double y, double px,
                 double py, double inv_2e) {
    double u, ux, uy;
    field.value_and_gradient(x, y, u, ux, uy);
    return {px, py, -ux * inv_2e, -uy * inv_2e};
}

}  // namespace

double transverse_energy(const ProtonState& s, const PotentialField& field) {
    return s.e * (s.phi_x * s.phi_x + s.phi_y * s.phi_y) +
           field.dynamic_potential(s.x, s.y);
}

ProtonState step_rk4(const ProtonState& s, const PotentialField& field,
                     double dz) {
    if (!(dz > 0.0)) throw std::invalid_argument("step_rk4: dz must be positive");
    const double inv_2e = 1.0 / (2.0 * s.e);
    const Deriv k1 = rhs(field, s.x, s.y, s.phi_x, s.phi_y, inv_2e);
    const double h2 = 0.5 * dz;
    const Deriv k2 = rhs(field, s.x + h2 * k1.dx, s.y + h2 * k1.dy,
                         s.phi_x + h2 * k1.dpx, s.phi_y + h2 * k1.dpy, inv_2e);
    const Deriv k3 = rhs(field, s.x + h2 * k2.dx, s.y + h2 * k2.dy,
                         s.phi_x + h2 * k2.dpx, s.phi_y + h2 * k2.dpy, inv_2e);
    const Deriv k4 = rhs(field, s.x + dz * k3.dx, s.y + dz * k3.dy,
                         s.phi_x + dz * k3.dpx, s.phi_y + dz * k3.dpy, inv_2e);
    ProtonState out = s;
    const double w = dz / 6.0;
    out.x += w * (k1.dx + 2.0 * k2.dx + 2.0 * k3.dx + k4.dx);
    out.y += w * (k1.dy + 2.0 * k2.dy + 2.0 * k3.dy + k4.dy);
    out.phi_x += w * (k1.dpx + 2.0 * k2.dpx + 2.0 * k3.dpx + k4.dpx);
    out.phi_y += w * (k1.dpy + 2.0 * k2.dpy + 2.0 * k3.dpy + k4.dpy);
    out.z += dz;
    return out;
}

ProtonState step_gauss2(const ProtonState& s, const PotentialField& field,
                        double dz) {
    if (!(dz > 0.0)) throw std::invalid_argument("step_gauss2: dz must be positive");
    constexpr double r3 = 1.7320508075688772;
    constexpr double a11 = 0.25, a12 = 0.25 - r3 / 6.0;
    constexpr double a21 = 0.25 + r3 / 6.0, a22 = 0.25;
    const double inv_2e = 1.0 / (2.0 * s.e);

    Deriv g1 = rhs(field, s.x, s.y, s.phi_x, s.phi_y, inv_2e);
    Deriv g2 = g1;
    for (int it = 0; it < 8; ++it) {
        const Deriv n1 = rhs(field, s.x + dz * (a11 * g1.dx + a12 * g2.dx),
                             s.y + dz * (a11 * g1.dy + a12 * g2.dy),
                             s.phi_x + dz * (a11 * g1.dpx + a12 * g2.dpx),
                             s.phi_y + dz * (a11 * g1.dpy + a12 * g2.dpy), inv_2e);
        const Deriv n2 = rhs(field, s.x + dz * (a21 * g1.dx + a22 * g2.dx),
                             s.y + dz * (a21 * g1.dy + a22 * g2.dy),
                             s.phi_x + dz * (a21 * g1.dpx + a22 * g2.dpx),
                             s.phi_y + dz * (a21 * g1.dpy + a22 * g2.dpy), inv_2e);
        const double delta = std::abs(n1.dpx - g1.dpx) + std::abs(n1.dpy - g1.dpy) +
                             std::abs(n2.dpx - g2.dpx) + std::abs(n2.dpy - g2.dpy);
        g1 = n1;
        g2 = n2;
        if (delta < 1e-16) break;
    }
    ProtonState out = s;
    out.x += 0.5 * dz * (g1.dx + g2.dx);
    out.y += 0.5 * dz * (g1.dy + g2.dy);
    out.phi_x += 0.5 * dz * (g1.dpx + g2.dpx);
    out.phi_y += 0.5 * dz * (g1.dpy + g2.dpy);
    out.z += dz;
    return out;
}

double energy_loss_rate(const ProtonState& s, const PotentialField& field,
                        bool* clamped) {
    if (clamped) *clamped = false;
    const double ne = field.dynamic_electron_density(s.x, s.y);
    if (!(ne > 0.0)) return 0.0;

    using namespace constants;
    const double me_v2 = 2.0 * s.e * electron_mass_eV / proton_mass_eV;  // eV
    // plasma frequency of the local electron gas
    const double omega_e =
        std::sqrt(4.0 * pi * e2_eV_nm * ne * c_nm_per_s * c_nm_per_s /
                  electron_mass_eV);
    const double log_arg = 2.0 * me_v2 / (hbar_eV_s * omega_e);
    if (log_arg <= 1.0) {
        if (clamped) *clamped = true;
        return 0.0;
    }
    const double pref = 4.0 * pi * field.geometry().z1 * field.geometry().z1 *
                        e2_eV_nm * e2_eV_nm / me_v2;
    return pref * ne * std::log(log_arg);
}

double electron_frequency(const ProtonState& s, const PotentialField& field) {
    using namespace constants;
    const double ne = field.dynamic_electron_density(s.x, s.y);
    if (!(ne > 0.0)) return 0.0;
    return std::sqrt(4.0 * pi * e2_eV_nm * ne * c_nm_per_s * c_nm_per_s /
                     electron_mass_eV);
}

void multiple_scattering_kick(ProtonState& s, const PotentialField& field,
                              double dz, RngStream& rng) {
    const double rate = energy_loss_rate(s, field);
    const double d_omega_dz =
        constants::electron_mass_eV / (2.0 * constants::proton_mass_eV * s.e) *
        rate;
    const double sigma = std::sqrt(0.5 * d_omega_dz * dz);
    s.phi_x += sigma * rng.normal();
    s.phi_y += sigma * rng.normal();
}

ExitRecord propagate(const ProtonState& initial, const PotentialField& field,
                     double length_nm, const PropagationOptions& options,
                     RngStream& rng, Trajectory* trajectory) {
    if (!(length_nm > 0.0))
        throw std::invalid_argument("propagate: length must be positive");
    double step = options.step_nm;
    if (step <= 0.0) {
        if (options.steps_per_length < 1)
            throw std::invalid_argument("propagate: no valid step size");
        step = length_nm / options.steps_per_length;
    }
    if (step > length_nm) step = length_nm;

    const ChannelGeometry& geo = field.geometry();
    const double r_dech = options.dechannel_radius_factor * geo.screening_radius;
    const double r_dech2 = r_dech * r_dech;
    const double bound = geo.mesh_bound();

    auto lost = [&](const ProtonState& s) {
        if (std::abs(s.phi_x) > options.max_angle_rad ||
            std::abs(s.phi_y) > options.max_angle_rad)
            return true;
        if (std::max(std::abs(s.x + s.y), std::abs(s.x - s.y)) > bound)
            return true;
        return field.nearest_string_sq(s.x, s.y) < r_dech2;
    };

    ProtonState s = initial;
    s.z = 0.0;
    ExitRecord rec;
    rec.entry_x = initial.x;
    rec.entry_y = initial.y;
    bool clamped_any = false;

    if (trajectory) trajectory->push_back({s.z, s.x, s.y, s.phi_x, s.phi_y, s.e});

    if (lost(s)) {
        rec.flag = ExitFlag::dechanneled;
    } else {
        double remaining = length_nm;
        while (remaining > 1e-12) {
            const double dz = std::min(step, remaining);
            const ProtonState prev = s;
            s = (options.integrator == Integrator::rk4)
                    ? step_rk4(prev, field, dz)
                    : step_gauss2(prev, field, dz);
            if (options.energy_loss) {
                ProtonState mid = prev;
                mid.x = 0.5 * (prev.x + s.x);
                mid.y = 0.5 * (prev.y + s.y);
                bool clamped = false;
                const double rate = energy_loss_rate(mid, field, &clamped);
                clamped_any |= clamped;
                s.e = prev.e - rate * dz;
                if (s.e < 1.0) {  // outside the model's validity; stop here
                    s.e = 1.0;
                    rec.flag = ExitFlag::dechanneled;
                    break;
                }
            }
            if (options.multiple_scattering)
                multiple_scattering_kick(s, field, dz, rng);
            remaining -= dz;
            if (trajectory)
                trajectory->push_back({s.z, s.x, s.y, s.phi_x, s.phi_y, s.e});
            if (lost(s)) {
                rec.flag = ExitFlag::dechanneled;
                break;
            }
        }
    }

    rec.x = s.x;
    rec.y = s.y;
    rec.theta_x = s.phi_x * 1e3;
    rec.theta_y = s.phi_y * 1e3;
    rec.e_exit = s.e;
    rec.loss_clamped = clamped_any;
    return rec;
}

}  // namespace chansim
