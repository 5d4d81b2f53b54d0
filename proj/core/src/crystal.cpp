#include "chansim/crystal.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "chansim/constants.hpp"

namespace chansim {

double screening_radius(int z2) {
    if (z2 < 1) throw std::domain_error("screening_radius: z2 must be >= 1");
    using constants::pi;
    return std::cbrt(9.0 * pi * pi / (128.0 * z2)) * constants::bohr_radius_nm;
}

double critical_angle(int z1, int z2, double d_nm, double e_eV) {
    if (z1 < 1 || z2 < 1 || d_nm <= 0.0 || e_eV <= 0.0)
        throw std::domain_error("critical_angle: all inputs must be positive");
    const double psi_rad =
        std::sqrt(2.0 * z1 * z2 * constants::e2_eV_nm / (d_nm * e_eV));
    return psi_rad * 1e3;
}

ChannelGeometry build_channel(const CrystalConfig& config) {
    if (config.material != "Si" || config.axis != "100")
        throw std::invalid_argument(
            "build_channel: only the Si <100> axial channel is supported");
    if (config.coordination_lines < 1)
        throw std::invalid_argument("build_channel: coordination_lines must be >= 1");
    if (config.lattice_constant_nm <= 0.0)
        throw std::invalid_argument("build_channel: lattice constant must be positive");
    if (config.sigma_th_nm < 0.0)
        throw std::invalid_argument("build_channel: sigma_th must be non-negative");
    if (config.z1 < 1 || config.z2 < 1)
        throw std::invalid_argument("build_channel: atomic numbers must be >= 1");
    if (config.energy_eV <= 0.0)
        throw std::invalid_argument("build_channel: energy must be positive");

    ChannelGeometry g;
    g.lattice_constant = config.lattice_constant_nm;
    g.d_string = config.lattice_constant_nm;  // one atom per cell length and column
    g.z1 = config.z1;
    g.z2 = config.z2;
    g.sigma_th = config.sigma_th_nm;
    g.e_ref = config.energy_eV;
    g.coordination_lines = config.coordination_lines;
    g.screening_radius = screening_radius(config.z2);
    g.psi_c = critical_angle(config.z1, config.z2, g.d_string, config.energy_eV);

    // Strings sit on the odd sites (i+j odd) of the a/4 mesh. Ring k of the
    // rotated square lattice satisfies max(|i+j|,|i-j|) = 2k-1, so keeping K
    // coordination lines keeps 4K^2 strings.
    const double a4 = 0.25 * g.lattice_constant;
    const int m = 2 * config.coordination_lines - 1;
    for (int i = -m; i <= m; ++i) {
        for (int j = -m; j <= m; ++j) {
            if (((i + j) % 2 + 2) % 2 != 1) continue;
            if (std::max(std::abs(i + j), std::abs(i - j)) > m) continue;
            g.string_positions.push_back({i * a4, j * a4});
        }
    }
    // deterministic ordering independent of loop details
    std::sort(g.string_positions.begin(), g.string_positions.end(),
              [](const Vec2& p, const Vec2& q) {
                  return p.x != q.x ? p.x < q.x : p.y < q.y;
              });
    return g;
}

}  // namespace chansim
