#pragma once

#include <cstdint>
#include <vector>

#include "chansim/potential.hpp"
#include "chansim/rng.hpp"

namespace chansim {

// Transverse state of one propagating proton. Angles are the scattering-angle
// components v_x/v0, v_y/v0 in rad; e is the kinetic energy in eV.
struct ProtonState {
    double x = 0.0;      // nm
    double y = 0.0;      // nm
    double phi_x = 0.0;  // rad
    double phi_y = 0.0;  // rad
    double z = 0.0;      // depth, nm
    double e = 1.0e6;    // eV
};

enum class Integrator { rk4, gauss2 };

struct PropagationOptions {
    double step_nm = 0.0;  // integration step; propagate derives it from
                           // steps_per_length when 0
    int steps_per_length = 4096;
    bool energy_loss = false;
    bool multiple_scattering = false;
    bool record_trajectory = false;
    Integrator integrator = Integrator::rk4;
    double dechannel_radius_factor = 0.001;  // times the screening radius
    double max_angle_rad = 0.1;              // small-angle validity bound
};

enum class ExitFlag : std::uint8_t { channeled = 0, dechanneled = 1 };

// Exit observables of one proton; the unit of all ensemble statistics.
struct ExitRecord {
    std::uint64_t proton_index = 0;
    double x = 0.0;        // nm
    double y = 0.0;        // nm
    double theta_x = 0.0;  // mrad
    double theta_y = 0.0;  // mrad
    double e_exit = 0.0;   // eV
    double entry_x = 0.0;  // nm, impact parameter (kept for correlation moments)
    double entry_y = 0.0;  // nm
    ExitFlag flag = ExitFlag::channeled;
    bool loss_clamped = false;  // stopping-power log clamped at least once
};

struct TrajectoryPoint {
    double z, x, y, phi_x, phi_y, e;
};
using Trajectory = std::vector<TrajectoryPoint>;

// E_perp = E (phi_x^2 + phi_y^2) + U(x, y) on the dynamic surface (eV)
double transverse_energy(const ProtonState& state, const PotentialField& field);

// one classical RK4 step of dz (nm); energy held constant
ProtonState step_rk4(const ProtonState& state, const PotentialField& field,
                     double dz);

// one 2-stage Gauss-Legendre step (implicit, fixed-point solve)
ProtonState step_gauss2(const ProtonState& state, const PotentialField& field,
                        double dz);

// electronic stopping power at the state's position (eV/nm, >= 0). The
// Bethe-type log is clamped to zero outside its validity; *clamped reports it.
double energy_loss_rate(const ProtonState& state, const PotentialField& field,
                        bool* clamped = nullptr);

// local plasma frequency of the channel electron gas (rad/s)
double electron_frequency(const ProtonState& state, const PotentialField& field);

// add one multiple-scattering angular kick over dz to the state in place
void multiple_scattering_kick(ProtonState& state, const PotentialField& field,
                              double dz, RngStream& rng);

// integrate from z = 0 to z = length; returns the exit record (entry_x/y and
// proton_index are left for the caller). Dechanneling freezes the state.
ExitRecord propagate(const ProtonState& initial, const PotentialField& field,
                     double length_nm, const PropagationOptions& options,
                     RngStream& rng, Trajectory* trajectory = nullptr);

}  // namespace chansim
