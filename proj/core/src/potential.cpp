#include "chansim/potential.hpp"

#include <cmath>
#include <stdexcept>

#include "chansim/bessel.hpp"
#include "chansim/constants.hpp"

namespace chansim {

namespace {
constexpr double coincidence_r2 = 1e-18;  // nm^2; closer than this is "on axis"
}

PotentialField::PotentialField(ChannelGeometry geometry, FieldOptions options)
    : geometry_(std::move(geometry)), options_(options) {
    if (geometry_.string_positions.empty())
        throw std::invalid_argument("PotentialField: geometry has no strings");
    if (options_.strength_scale < 0.0)
        throw std::invalid_argument("PotentialField: strength_scale must be >= 0");
    prefactor_ = 2.0 * geometry_.z1 * geometry_.z2 * constants::e2_eV_nm /
                 geometry_.d_string * options_.strength_scale;
    inv_a_ = 1.0 / geometry_.screening_radius;
    const double sig2 = geometry_.sigma_th * geometry_.sigma_th;
    for (int i = 0; i < 3; ++i) {
        const double k = beta_[i] * inv_a_;
        alpha_folded_[i] =
            options_.thermal ? alpha_[i] * (1.0 + 0.5 * sig2 * k * k) : alpha_[i];
    }
    s_split_ = options_.table_r_split_nm * options_.table_r_split_nm;
    if (options_.evaluation == FieldEvaluation::radial_table) build_tables();
}

// ---------------------------------------------------------------------------
// exact radial kernels

double PotentialField::kernel_value(double r, Coeffs c) const {
    const auto& al = (c == Coeffs::bare) ? alpha_ : alpha_folded_;
    double sum = 0.0;
    for (int i = 0; i < 3; ++i) {
        const double t = beta_[i] * r * inv_a_;
        sum += al[i] * (t > 700.0 ? 0.0 : bessel_k0(t));
    }
    double v = prefactor_ * sum;
    if (options_.born) {
        const auto& b = *options_.born;
        v += b.b * std::pow(r, -b.n) * options_.strength_scale;
        if (c == Coeffs::folded && options_.thermal) {
            const double sig2 = geometry_.sigma_th * geometry_.sigma_th;
            v += 0.5 * sig2 * b.b * b.n * b.n * std::pow(r, -b.n - 2.0) *
                 options_.strength_scale;
        }
    }
    return v;
}

double PotentialField::kernel_dvdr(double r, Coeffs c) const {
    const auto& al = (c == Coeffs::bare) ? alpha_ : alpha_folded_;
    double sum = 0.0;
    for (int i = 0; i < 3; ++i) {
        const double k = beta_[i] * inv_a_;
        const double t = k * r;
        sum += al[i] * k * (t > 700.0 ? 0.0 : bessel_k1(t));
    }
    double d = -prefactor_ * sum;
    if (options_.born) {
        const auto& b = *options_.born;
        d += -b.n * b.b * std::pow(r, -b.n - 1.0) * options_.strength_scale;
        if (c == Coeffs::folded && options_.thermal) {
            const double sig2 = geometry_.sigma_th * geometry_.sigma_th;
            d += -0.5 * sig2 * b.b * b.n * b.n * (b.n + 2.0) *
                 std::pow(r, -b.n - 3.0) * options_.strength_scale;
        }
    }
    return d;
}

// d^2/ds^2 of the kernel as a function of s = r^2:
//   d2/ds2 K0(k sqrt(s)) = (k/(4 s)) (k K0(t) + 2 K1(t)/sqrt(s)),  t = k sqrt(s)
double PotentialField::kernel_d2vds2(double s, Coeffs c) const {
    const auto& al = (c == Coeffs::bare) ? alpha_ : alpha_folded_;
    const double r = std::sqrt(s);
    double sum = 0.0;
    for (int i = 0; i < 3; ++i) {
        const double k = beta_[i] * inv_a_;
        const double t = k * r;
        if (t > 700.0) continue;
        double k0, k1;
        bessel_k0_k1(t, k0, k1);
        sum += al[i] * (k / (4.0 * s)) * (k * k0 + 2.0 * k1 / r);
    }
    double d = prefactor_ * sum;
    if (options_.born) {
        const auto& b = *options_.born;
        const double m = -b.n / 2.0;  // r^-n = s^(m)
        d += b.b * m * (m - 1.0) * std::pow(s, m - 2.0) * options_.strength_scale;
        if (c == Coeffs::folded && options_.thermal) {
            const double sig2 = geometry_.sigma_th * geometry_.sigma_th;
            const double m2 = m - 1.0;
            d += 0.5 * sig2 * b.b * b.n * b.n * m2 * (m2 - 1.0) *
                 std::pow(s, m2 - 2.0) * options_.strength_scale;
        }
    }
    return d;
}

double PotentialField::kernel_laplacian(double r, Coeffs c) const {
    const auto& al = (c == Coeffs::bare) ? alpha_ : alpha_folded_;
    double sum = 0.0;
    for (int i = 0; i < 3; ++i) {
        const double k = beta_[i] * inv_a_;
        const double t = k * r;
        sum += al[i] * k * k * (t > 700.0 ? 0.0 : bessel_k0(t));
    }
    double lap = prefactor_ * sum;
    if (options_.born) {
        const auto& b = *options_.born;
        lap += b.b * b.n * b.n * std::pow(r, -b.n - 2.0) * options_.strength_scale;
        if (c == Coeffs::folded && options_.thermal) {
            const double sig2 = geometry_.sigma_th * geometry_.sigma_th;
            const double np2 = b.n + 2.0;
            lap += 0.5 * sig2 * b.b * b.n * b.n * np2 * np2 *
                   std::pow(r, -b.n - 4.0) * options_.strength_scale;
        }
    }
    return lap;
}

// ---------------------------------------------------------------------------
// radial tables (quintic Hermite in s = r^2)

void PotentialField::RadialTable::eval(double s, double& v, double& dvds) const {
    const double u = (s - s_min) * inv_ds;
    const auto i = static_cast<std::size_t>(u);
    const double tau = u - static_cast<double>(i);
    const auto& c = coeff[i];
    v = ((((c[5] * tau + c[4]) * tau + c[3]) * tau + c[2]) * tau + c[1]) * tau + c[0];
    dvds = ((((5.0 * c[5] * tau + 4.0 * c[4]) * tau + 3.0 * c[3]) * tau +
             2.0 * c[2]) * tau + c[1]) * inv_ds;
}

double PotentialField::RadialTable::value(double s) const {
    const double u = (s - s_min) * inv_ds;
    const auto i = static_cast<std::size_t>(u);
    const double tau = u - static_cast<double>(i);
    const auto& c = coeff[i];
    return ((((c[5] * tau + c[4]) * tau + c[3]) * tau + c[2]) * tau + c[1]) * tau + c[0];
}

void PotentialField::build_tables() {
    const std::size_t n = options_.table_knots;
    if (n < 16) throw std::invalid_argument("PotentialField: table_knots too small");
    const double s_max = options_.table_r_max_nm * options_.table_r_max_nm;
    if (s_split_ >= s_max)
        throw std::invalid_argument("PotentialField: table_r_split >= table_r_max");

    const double e2 = constants::e2_eV_nm;
    const double ne_scale = 1.0 / (4.0 * constants::pi * e2);

    auto build = [&](RadialTable& tab, auto value_fn, auto d1_fn, auto d2_fn) {
        tab.s_min = s_split_;
        tab.s_max = s_max;
        tab.ds = (s_max - s_split_) / static_cast<double>(n);
        tab.inv_ds = 1.0 / tab.ds;
        std::vector<std::array<double, 3>> knots(n + 1);
        for (std::size_t k = 0; k <= n; ++k) {
            const double s = tab.s_min + static_cast<double>(k) * tab.ds;
            knots[k] = {value_fn(s), d1_fn(s), d2_fn(s)};
        }
        tab.coeff.resize(n);
        const double h = tab.ds;
        for (std::size_t k = 0; k < n; ++k) {
            const auto [f0, d0, dd0] = knots[k];
            const auto [f1, d1, dd1] = knots[k + 1];
            auto& c = tab.coeff[k];
            c[0] = f0;
            c[1] = h * d0;
            c[2] = 0.5 * h * h * dd0;
            const double df = f1 - f0;
            c[3] = 10.0 * df - (6.0 * d0 + 4.0 * d1) * h -
                   (1.5 * dd0 - 0.5 * dd1) * h * h;
            c[4] = -15.0 * df + (8.0 * d0 + 7.0 * d1) * h +
                   (1.5 * dd0 - dd1) * h * h;
            c[5] = 6.0 * df - 3.0 * (d0 + d1) * h - 0.5 * (dd0 - dd1) * h * h;
        }
    };

    // dynamic-surface potential kernel, argument s = r^2
    build(
        pot_,
        [&](double s) { return kernel_value(std::sqrt(s), Coeffs::folded); },
        [&](double s) {
            const double r = std::sqrt(s);
            return kernel_dvdr(r, Coeffs::folded) / (2.0 * r);
        },
        [&](double s) { return kernel_d2vds2(s, Coeffs::folded); });

    // per-string electron density: Lap of the dynamic surface / (4 pi e^2).
    // Its s-derivatives reuse the kernel identities with beta^2-weighted
    // coefficients, evaluated by finite products below.
    auto lap_value = [&](double s) {
        return ne_scale * kernel_laplacian(std::sqrt(s), Coeffs::folded);
    };
    auto lap_d1 = [&](double s) {
        const double r = std::sqrt(s);
        double sum = 0.0;
        for (int i = 0; i < 3; ++i) {
            const double k = beta_[i] * inv_a_;
            const double t = k * r;
            if (t > 700.0) continue;
            sum += alpha_folded_[i] * k * k * (-k) * bessel_k1(t) / (2.0 * r);
        }
        double d = prefactor_ * sum;
        if (options_.born) {
            const auto& b = *options_.born;
            const double m = -(b.n + 2.0) / 2.0;
            d += b.b * b.n * b.n * m * std::pow(s, m - 1.0) * options_.strength_scale;
            if (options_.thermal) {
                const double sig2 = geometry_.sigma_th * geometry_.sigma_th;
                const double np2 = b.n + 2.0;
                const double m4 = -(b.n + 4.0) / 2.0;
                d += 0.5 * sig2 * b.b * b.n * b.n * np2 * np2 * m4 *
                     std::pow(s, m4 - 1.0) * options_.strength_scale;
            }
        }
        return ne_scale * d;
    };
    auto lap_d2 = [&](double s) {
        const double r = std::sqrt(s);
        double sum = 0.0;
        for (int i = 0; i < 3; ++i) {
            const double k = beta_[i] * inv_a_;
            const double t = k * r;
            if (t > 700.0) continue;
            double k0, k1;
            bessel_k0_k1(t, k0, k1);
            sum += alpha_folded_[i] * k * k * (k / (4.0 * s)) * (k * k0 + 2.0 * k1 / r);
        }
        double d = prefactor_ * sum;
        if (options_.born) {
            const auto& b = *options_.born;
            const double m = -(b.n + 2.0) / 2.0;
            d += b.b * b.n * b.n * m * (m - 1.0) * std::pow(s, m - 2.0) *
                 options_.strength_scale;
            if (options_.thermal) {
                const double sig2 = geometry_.sigma_th * geometry_.sigma_th;
                const double np2 = b.n + 2.0;
                const double m4 = -(b.n + 4.0) / 2.0;
                d += 0.5 * sig2 * b.b * b.n * b.n * np2 * np2 * m4 * (m4 - 1.0) *
                     std::pow(s, m4 - 2.0) * options_.strength_scale;
            }
        }
        return ne_scale * d;
    };
    build(ne_, lap_value, lap_d1, lap_d2);
}

// ---------------------------------------------------------------------------
// public analysis surface

double PotentialField::string_potential(double r_nm) const {
    if (!(r_nm > 0.0))
        throw std::domain_error("string_potential: r must be positive");
    return kernel_value(r_nm, Coeffs::bare);
}

double PotentialField::channel_potential(double x, double y) const {
    double sum = 0.0;
    for (const Vec2& p : geometry_.string_positions) {
        const double dx = x - p.x, dy = y - p.y;
        const double s = dx * dx + dy * dy;
        if (s < coincidence_r2)
            throw std::domain_error("channel_potential: point coincides with a string");
        sum += kernel_value(std::sqrt(s), Coeffs::bare);
    }
    return sum;
}

PotentialField::Hessian PotentialField::hessian_impl(double x, double y,
                                                     Coeffs coeffs) const {
    const auto& al = (coeffs == Coeffs::bare) ? alpha_ : alpha_folded_;
    Hessian h;
    for (const Vec2& p : geometry_.string_positions) {
        const double dx = x - p.x, dy = y - p.y;
        const double s = dx * dx + dy * dy;
        if (s < coincidence_r2)
            throw std::domain_error("potential_hessian: point coincides with a string");
        const double r = std::sqrt(s);
        for (int i = 0; i < 3; ++i) {
            const double k = beta_[i] * inv_a_;
            const double t = k * r;
            if (t > 700.0) continue;
            double k0, k1;
            bessel_k0_k1(t, k0, k1);
            const double c = prefactor_ * al[i] * k;
            h.uxx += c * (k0 * k * dx * dx / s + (2.0 * dx * dx - s) / (s * r) * k1);
            h.uyy += c * (k0 * k * dy * dy / s + (2.0 * dy * dy - s) / (s * r) * k1);
        }
        if (options_.born) {
            const auto& b = *options_.born;
            auto add_power = [&](double amp, double m) {
                // d2/dx2 of amp * r^m
                const double rm2 = amp * std::pow(r, m - 2.0);
                const double rm4 = amp * std::pow(r, m - 4.0);
                h.uxx += m * rm2 + m * (m - 2.0) * rm4 * dx * dx;
                h.uyy += m * rm2 + m * (m - 2.0) * rm4 * dy * dy;
            };
            add_power(b.b * options_.strength_scale, -b.n);
            if (coeffs == Coeffs::folded && options_.thermal) {
                const double sig2 = geometry_.sigma_th * geometry_.sigma_th;
                add_power(0.5 * sig2 * b.n * b.n * b.b * options_.strength_scale,
                          -b.n - 2.0);
            }
        }
    }
    return h;
}

PotentialField::Hessian PotentialField::potential_hessian(double x, double y) const {
    return hessian_impl(x, y, Coeffs::bare);
}

double PotentialField::laplacian(double x, double y) const {
    double sum = 0.0;
    for (const Vec2& p : geometry_.string_positions) {
        const double dx = x - p.x, dy = y - p.y;
        const double s = dx * dx + dy * dy;
        if (s < coincidence_r2)
            throw std::domain_error("laplacian: point coincides with a string");
        sum += kernel_laplacian(std::sqrt(s), Coeffs::bare);
    }
    return sum;
}

double PotentialField::thermal_potential(double x, double y) const {
    double sum = 0.0;
    for (const Vec2& p : geometry_.string_positions) {
        const double dx = x - p.x, dy = y - p.y;
        const double s = dx * dx + dy * dy;
        if (s < coincidence_r2)
            throw std::domain_error("thermal_potential: point coincides with a string");
        sum += kernel_value(std::sqrt(s), Coeffs::folded);
    }
    return sum;
}

double PotentialField::electron_density(double x, double y) const {
    const double e2 = constants::e2_eV_nm;
    double sum = 0.0;
    for (const Vec2& p : geometry_.string_positions) {
        const double dx = x - p.x, dy = y - p.y;
        const double s = dx * dx + dy * dy;
        if (s < coincidence_r2)
            throw std::domain_error("electron_density: point coincides with a string");
        sum += kernel_laplacian(std::sqrt(s), Coeffs::folded);
    }
    return sum / (4.0 * constants::pi * e2);
}

double PotentialField::transverse_frequency() const {
    // harmonic stiffness = axial curvature of the dynamic surface
    const double k_curv = hessian_impl(0.0, 0.0, Coeffs::folded).uxx;
    if (!(k_curv > 0.0))
        throw std::domain_error(
            "transverse_frequency: channel curvature is not positive");
    const double c = constants::c_nm_per_s;
    const double omega = std::sqrt(k_curv * c * c / constants::proton_mass_eV);
    return omega / (2.0 * constants::pi);
}

// ---------------------------------------------------------------------------
// dynamics surface

double PotentialField::dynamic_potential(double x, double y) const {
    const bool table = options_.evaluation == FieldEvaluation::radial_table;
    double sum = 0.0;
    for (const Vec2& p : geometry_.string_positions) {
        const double dx = x - p.x, dy = y - p.y;
        const double s = dx * dx + dy * dy;
        if (table && pot_.covers(s))
            sum += pot_.value(s);
        else
            sum += kernel_value(std::sqrt(s), Coeffs::folded);
    }
    return sum;
}

void PotentialField::value_and_gradient(double x, double y, double& u,
                                        double& ux, double& uy) const {
    const bool table = options_.evaluation == FieldEvaluation::radial_table;
    u = 0.0;
    ux = 0.0;
    uy = 0.0;
    for (const Vec2& p : geometry_.string_positions) {
        const double dx = x - p.x, dy = y - p.y;
        const double s = dx * dx + dy * dy;
        double v, dvds;
        if (table && pot_.covers(s)) {
            pot_.eval(s, v, dvds);
        } else {
            const double r = std::sqrt(s);
            v = kernel_value(r, Coeffs::folded);
            dvds = kernel_dvdr(r, Coeffs::folded) / (2.0 * r);
        }
        u += v;
        ux += 2.0 * dx * dvds;
        uy += 2.0 * dy * dvds;
    }
}

double PotentialField::dynamic_electron_density(double x, double y) const {
    const bool table = options_.evaluation == FieldEvaluation::radial_table;
    const double e2 = constants::e2_eV_nm;
    double sum = 0.0;
    for (const Vec2& p : geometry_.string_positions) {
        const double dx = x - p.x, dy = y - p.y;
        const double s = dx * dx + dy * dy;
        if (table && ne_.covers(s))
            sum += ne_.value(s);
        else
            sum += kernel_laplacian(std::sqrt(s), Coeffs::folded) /
                   (4.0 * constants::pi * e2);
    }
    return sum;
}

double PotentialField::nearest_string_sq(double x, double y) const {
    double best = 1e300;
    for (const Vec2& p : geometry_.string_positions) {
        const double dx = x - p.x, dy = y - p.y;
        const double s = dx * dx + dy * dy;
        if (s < best) best = s;
    }
    return best;
}

}  // namespace chansim
