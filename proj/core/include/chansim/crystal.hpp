#pragma once

#include <span>
#include <string>
#include <vector>

namespace chansim {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

// Configuration of the crystal/projectile pairing. Only the <100> axial
// channel of diamond-cubic Si is supported; anything else is rejected by
// build_channel.
struct CrystalConfig {
    std::string material = "Si";
    std::string axis = "100";
    double lattice_constant_nm = 0.5431;
    int coordination_lines = 3;   // square string rings kept around the channel
    double sigma_th_nm = 0.0074;  // 1D thermal vibration amplitude
    int z1 = 1;
    int z2 = 14;
    double energy_eV = 1.0e6;     // reference beam energy for psi_c
};

// Transverse geometry of one <100> axial channel. The diamond-lattice
// projection puts atomic strings on the odd checkerboard sites of an
// a_lat/4 mesh; the channel center (origin) and its translates occupy the
// even sites. Immutable after build_channel; share freely across threads.
struct ChannelGeometry {
    std::vector<Vec2> string_positions;  // nm, relative to the channel center
    double d_string = 0.0;               // atomic spacing along a string, nm
    double lattice_constant = 0.0;       // nm
    double screening_radius = 0.0;       // Moliere screening radius a, nm
    int z1 = 1;
    int z2 = 14;
    double sigma_th = 0.0;               // nm
    double psi_c = 0.0;                  // critical channeling angle, mrad
    double e_ref = 0.0;                  // energy used for psi_c, eV
    int coordination_lines = 0;

    // half diagonal of the square cell bounded by the four nearest strings
    double channel_half_diagonal() const { return 0.25 * lattice_constant; }
    // strings occupy max(|x+y|,|x-y|) <= mesh_bound; beyond it the continuum
    // potential is no longer represented and trajectories count as lost
    double mesh_bound() const {
        return (2 * coordination_lines - 1) * 0.25 * lattice_constant;
    }
};

// Moliere screening radius a = (9 pi^2 / (128 z2))^(1/3) a0, in nm.
double screening_radius(int z2);

// Critical channeling angle sqrt(2 z1 z2 e^2 / (d E)), in mrad.
// d in nm, e in eV.
double critical_angle(int z1, int z2, double d_nm, double e_eV);

ChannelGeometry build_channel(const CrystalConfig& config);

}  // namespace chansim
