#include "chansim/phasespace.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

namespace chansim {

namespace {

Eigen::Matrix4d symplectic_form() {
    Eigen::Matrix4d j = Eigen::Matrix4d::Zero();
    j(0, 1) = 1.0;
    j(1, 0) = -1.0;
    j(2, 3) = 1.0;
    j(3, 2) = -1.0;
    return j;
}

}  // namespace

void DensityGrid::add(double vx, double vy) {
    ++total;
    if (vx < window.x_min || vx >= window.x_max || vy < window.y_min ||
        vy >= window.y_max) {
        ++out_of_window;
        return;
    }
    const int ix = static_cast<int>((vx - window.x_min) / window.width_x() * nx);
    const int iy = static_cast<int>((vy - window.y_min) / window.width_y() * ny);
    const int cx = std::clamp(ix, 0, nx - 1);
    const int cy = std::clamp(iy, 0, ny - 1);
    ++counts[std::size_t(cy) * nx + cx];
}

void DensityGrid::merge(const DensityGrid& other) {
    if (other.nx != nx || other.ny != ny || other.plane != plane)
        throw std::invalid_argument("DensityGrid::merge: incompatible grids");
    for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += other.counts[i];
    total += other.total;
    out_of_window += other.out_of_window;
}

std::vector<std::uint64_t> DensityGrid::marginal(int axis) const {
    std::vector<std::uint64_t> out(axis == 0 ? nx : ny, 0);
    for (int iy = 0; iy < ny; ++iy)
        for (int ix = 0; ix < nx; ++ix)
            out[axis == 0 ? ix : iy] += counts[std::size_t(iy) * nx + ix];
    return out;
}

DensityGrid make_grid(Plane plane, int nx, int ny, const GridWindow& window) {
    if (nx < 2 || ny < 2)
        throw std::invalid_argument("histogram2d: need at least 2 bins per axis");
    if (!(window.width_x() > 0.0) || !(window.width_y() > 0.0))
        throw std::invalid_argument("histogram2d: degenerate window");
    DensityGrid g;
    g.plane = plane;
    g.nx = nx;
    g.ny = ny;
    g.window = window;
    g.counts.assign(std::size_t(nx) * ny, 0);
    return g;
}

void accumulate(DensityGrid& grid, const RecordTable& records) {
    const bool angular = grid.plane == Plane::angular;
    for (std::size_t i = 0; i < records.size(); ++i) {
        if ((records.flag[i] & 0x7F) != 0) continue;  // channeled only
        if (angular)
            grid.add(records.theta_x[i], records.theta_y[i]);
        else
            grid.add(records.x[i], records.y[i]);
    }
}

DensityGrid histogram2d(const RecordTable& records, Plane plane, int nx, int ny,
                        const GridWindow& window) {
    DensityGrid g = make_grid(plane, nx, ny, window);
    accumulate(g, records);
    return g;
}

BeamSigma beam_sigma(const RecordTable& records, SigmaSubspace subspace,
                     double lambda, double tilt, bool mean_centered) {
    if (records.size() < 2)
        throw std::invalid_argument("beam_sigma: need at least 2 records");

    BeamSigma sig;
    sig.subspace = subspace;
    sig.mean_centered = mean_centered;

    auto vec = [&](std::size_t i, std::array<double, 4>& v) {
        switch (subspace) {
            case SigmaSubspace::exit_transverse:
                v = {records.x[i], records.theta_x[i] * 1e-3, records.y[i],
                     records.theta_y[i] * 1e-3};
                break;
            case SigmaSubspace::config_x:
                v = {records.entry_x[i], records.x[i], lambda, tilt};
                break;
            case SigmaSubspace::config_y:
                v = {records.entry_y[i], records.y[i], lambda, tilt};
                break;
            case SigmaSubspace::angular_x:
                v = {records.entry_x[i], records.theta_x[i] * 1e-3, lambda, tilt};
                break;
            case SigmaSubspace::angular_y:
                v = {records.entry_y[i], records.theta_y[i] * 1e-3, lambda, tilt};
                break;
        }
    };

    std::array<double, 4> mean{0, 0, 0, 0};
    std::uint64_t n = 0;
    std::array<double, 4> v;
    if (mean_centered) {
        for (std::size_t i = 0; i < records.size(); ++i) {
            if ((records.flag[i] & 0x7F) != 0) continue;
            vec(i, v);
            for (int a = 0; a < 4; ++a) mean[a] += v[a];
            ++n;
        }
        if (n < 2) throw std::invalid_argument("beam_sigma: not enough channeled records");
        for (auto& mv : mean) mv /= static_cast<double>(n);
        n = 0;
    }

    for (std::size_t i = 0; i < records.size(); ++i) {
        if ((records.flag[i] & 0x7F) != 0) continue;
        vec(i, v);
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b)
                sig.m[std::size_t(a) * 4 + b] += (v[a] - mean[a]) * (v[b] - mean[b]);
        ++n;
    }
    if (n < 2) throw std::invalid_argument("beam_sigma: not enough channeled records");
    for (auto& mv : sig.m) mv /= static_cast<double>(n);
    sig.n_samples = n;
    return sig;
}

BeamSigma merge_sigma(std::span<const BeamSigma> parts) {
    if (parts.empty()) throw std::invalid_argument("merge_sigma: empty input");
    BeamSigma out;
    out.subspace = parts.front().subspace;
    for (const auto& p : parts) {
        if (p.subspace != out.subspace || p.mean_centered)
            throw std::invalid_argument(
                "merge_sigma: needs raw moments over one subspace");
        for (int i = 0; i < 16; ++i)
            out.m[i] += p.m[i] * static_cast<double>(p.n_samples);
        out.n_samples += p.n_samples;
    }
    if (out.n_samples == 0) throw std::invalid_argument("merge_sigma: no samples");
    for (auto& mv : out.m) mv /= static_cast<double>(out.n_samples);
    return out;
}

SigmaInvariants invariants(const BeamSigma& sigma) {
    Eigen::Matrix4d s;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) s(i, j) = sigma.at(i, j);
    const Eigen::Matrix4d j = symplectic_form();
    const Eigen::Matrix4d sjsj = s * j * s * j;
    return {-0.5 * sjsj.trace(), s.determinant()};
}

TransferMatrix estimate_transfer_matrix(const PotentialField& field,
                                        double length_nm,
                                        const ProtonState& reference,
                                        double h_pos_nm, double h_ang_rad,
                                        const PropagationOptions& options) {
    if (!(h_pos_nm > 0.0) || !(h_ang_rad > 0.0))
        throw std::invalid_argument("estimate_transfer_matrix: h must be positive");
    PropagationOptions opts = options;
    opts.energy_loss = false;
    opts.multiple_scattering = false;
    opts.record_trajectory = false;

    const std::array<double, 4> h = {h_pos_nm, h_ang_rad, h_pos_nm, h_ang_rad};

    auto probe = [&](const ProtonState& init) {
        RngStream rng(0, 0);  // unused: dissipation is off
        ExitRecord rec = propagate(init, field, length_nm, opts, rng);
        if (rec.flag != ExitFlag::channeled)
            throw std::runtime_error(
                "estimate_transfer_matrix: probe trajectory dechanneled");
        return std::array<double, 4>{rec.x, rec.theta_x * 1e-3, rec.y,
                                     rec.theta_y * 1e-3};
    };

    Eigen::Matrix4d m;
    for (int k = 0; k < 4; ++k) {
        ProtonState plus = reference;
        ProtonState minus = reference;
        switch (k) {
            case 0: plus.x += h[0]; minus.x -= h[0]; break;
            case 1: plus.phi_x += h[1]; minus.phi_x -= h[1]; break;
            case 2: plus.y += h[2]; minus.y -= h[2]; break;
            case 3: plus.phi_y += h[3]; minus.phi_y -= h[3]; break;
        }
        const auto fp = probe(plus);
        const auto fm = probe(minus);
        for (int i = 0; i < 4; ++i) m(i, k) = (fp[i] - fm[i]) / (2.0 * h[k]);
    }

    TransferMatrix out;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) out.m[std::size_t(i) * 4 + j] = m(i, j);
    out.det = m.determinant();
    const Eigen::Matrix4d j = symplectic_form();
    const Eigen::Matrix4d res = m.transpose() * j * m - j;
    out.symplectic_residual = res.cwiseAbs().maxCoeff();
    return out;
}

JacobianMap jacobian_map(const PotentialField& field, double length_nm,
                         const GridWindow& window, int nx, int ny,
                         double tilt_rad, double h_nm,
                         const PropagationOptions& options, double caustic_eps) {
    if (nx < 1 || ny < 1 || !(h_nm > 0.0))
        throw std::invalid_argument("jacobian_map: bad grid or stencil");
    PropagationOptions opts = options;
    opts.energy_loss = false;
    opts.multiple_scattering = false;
    opts.record_trajectory = false;

    JacobianMap map;
    map.nx = nx;
    map.ny = ny;
    map.window = window;
    map.nodes.resize(std::size_t(nx) * ny);

    auto angles = [&](double x0, double y0, std::array<double, 2>& th) {
        ProtonState init;
        init.x = x0;
        init.y = y0;
        init.phi_x = tilt_rad;
        init.e = field.geometry().e_ref;
        RngStream rng(0, 0);
        ExitRecord rec = propagate(init, field, length_nm, opts, rng);
        th = {rec.theta_x, rec.theta_y};  // mrad
        return rec.flag == ExitFlag::channeled;
    };

    for (int iy = 0; iy < ny; ++iy) {
        for (int ix = 0; ix < nx; ++ix) {
            const double x0 =
                window.x_min + (ix + 0.5) * window.width_x() / nx;
            const double y0 =
                window.y_min + (iy + 0.5) * window.width_y() / ny;
            JacobianNode& node = map.nodes[std::size_t(iy) * nx + ix];
            node.x = x0;
            node.y = y0;
            std::array<double, 2> xp, xm, yp, ym;
            if (!(angles(x0 + h_nm, y0, xp) && angles(x0 - h_nm, y0, xm) &&
                  angles(x0, y0 + h_nm, yp) && angles(x0, y0 - h_nm, ym)))
                continue;  // stays invalid
            const double dtxdx = (xp[0] - xm[0]) / (2.0 * h_nm);
            const double dtydx = (xp[1] - xm[1]) / (2.0 * h_nm);
            const double dtxdy = (yp[0] - ym[0]) / (2.0 * h_nm);
            const double dtydy = (yp[1] - ym[1]) / (2.0 * h_nm);
            node.j = dtxdx * dtydy - dtydx * dtxdy;
            node.valid = true;
            if (std::abs(node.j) < caustic_eps) {
                node.caustic = true;
            } else {
                node.sigma = 1.0 / std::abs(node.j);
            }
        }
    }
    return map;
}

double fwhm(const DensityGrid& grid, int axis) {
    const auto h = grid.marginal(axis);
    const int n = static_cast<int>(h.size());
    const auto mx = std::max_element(h.begin(), h.end());
    const auto mn = std::min_element(h.begin(), h.end());
    if (*mx == *mn) throw FwhmError("fwhm: flat profile");
    const int peak = static_cast<int>(mx - h.begin());
    const double half = 0.5 * static_cast<double>(*mx);

    const double lo = axis == 0 ? grid.window.x_min : grid.window.y_min;
    const double w = (axis == 0 ? grid.window.width_x() : grid.window.width_y()) / n;
    auto center = [&](int i) { return lo + (i + 0.5) * w; };
    auto cross = [&](int i, int j) {
        const double hi = static_cast<double>(h[i]);
        const double hj = static_cast<double>(h[j]);
        return center(i) + (half - hi) * (center(j) - center(i)) / (hj - hi);
    };

    int left = peak;
    while (left > 0 && static_cast<double>(h[left - 1]) > half) --left;
    if (left == 0 && static_cast<double>(h[0]) > half)
        throw FwhmError("fwhm: profile does not fall below half maximum (left)");
    int right = peak;
    while (right < n - 1 && static_cast<double>(h[right + 1]) > half) ++right;
    if (right == n - 1 && static_cast<double>(h[n - 1]) > half)
        throw FwhmError("fwhm: profile does not fall below half maximum (right)");

    const double xl = left == 0 ? center(0) - 0.5 * w : cross(left - 1, left);
    const double xr = right == n - 1 ? center(n - 1) + 0.5 * w : cross(right + 1, right);
    return xr - xl;
}

std::vector<int> find_peaks(std::span<const std::uint64_t> h,
                            double min_prominence_fraction,
                            int min_separation_bins) {
    const int n = static_cast<int>(h.size());
    if (n < 3) return {};
    const std::uint64_t hmax = *std::max_element(h.begin(), h.end());
    if (hmax == 0) return {};
    const double min_prom = min_prominence_fraction * static_cast<double>(hmax);

    std::vector<int> cand;
    for (int i = 1; i + 1 < n; ++i) {
        if (h[i] >= h[i - 1] && h[i] > h[i + 1]) {
            // prominence: drop to the lowest saddle before a higher bar
            auto side_min = [&](int dir) {
                std::uint64_t low = h[i];
                for (int k = i + dir; k >= 0 && k < n; k += dir) {
                    if (h[k] > h[i]) break;
                    low = std::min(low, h[k]);
                }
                return low;
            };
            const std::uint64_t base = std::max(side_min(-1), side_min(+1));
            if (static_cast<double>(h[i] - base) >= min_prom) cand.push_back(i);
        }
    }
    // enforce separation, keeping taller peaks first
    std::sort(cand.begin(), cand.end(),
              [&](int a, int b) { return h[a] != h[b] ? h[a] > h[b] : a < b; });
    std::vector<int> kept;
    for (int c : cand) {
        bool ok = true;
        for (int k : kept)
            if (std::abs(k - c) < min_separation_bins) ok = false;
        if (ok) kept.push_back(c);
    }
    std::sort(kept.begin(), kept.end());
    return kept;
}

double flux_enhancement(double a0, double e, double phi, double k) {
    if (!(a0 > 0.0) || !(k > 0.0) || !(e > 0.0))
        throw std::domain_error("flux_enhancement: a0, e, k must be positive");
    if (phi == 0.0) return std::numeric_limits<double>::infinity();
    const double ratio =
        3.14159265358979323846 * e * phi * phi / (a0 * k);
    if (std::abs(ratio - 1.0) <= 4.0 * std::numeric_limits<double>::epsilon())
        return 0.0;  // boundary tilt of the central contour
    return -std::log(ratio);
}

}  // namespace chansim
