#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "chansim/dynamics.hpp"

namespace chansim {

// Incident beam description. The tilt is a fraction of the critical angle at
// the beam energy, applied to the phi_x component (rotation of the initial
// angles about the theta_x = 0 axis); the divergence Omega_b feeds Gaussian
// components with per-axis standard deviation Omega_b / sqrt(2).
struct BeamConfig {
    std::uint64_t n_protons = 0;
    double energy_eV = 1.0e6;
    double tilt_fraction = 0.0;      // of psi_c, in [0, 0.5]
    double divergence_mrad = 0.0;    // Omega_b
    std::uint64_t seed = 0;
    double impact_window_scale = 1.0;  // scales the channel-cell sampling window
};

// Columnar batch of exit records.
class RecordTable {
public:
    std::vector<double> x, y, theta_x, theta_y, e_exit, entry_x, entry_y;
    std::vector<std::uint8_t> flag;

    void resize(std::size_t n);
    void set(std::size_t i, const ExitRecord& r);
    ExitRecord row(std::size_t i) const;
    std::size_t size() const { return x.size(); }
    std::uint64_t channeled_count() const;
    std::uint64_t loss_clamped_count() const { return loss_clamped_; }
    void count_clamped();

private:
    std::uint64_t loss_clamped_ = 0;
};

// Initial state for proton `index`, deterministic in (seed, index): impact
// parameters uniform over the channel cell, angles tilt + Gaussian divergence.
ProtonState sample_initial(const BeamConfig& beam, const ChannelGeometry& geometry,
                           std::uint64_t index);

// Propagate the whole beam. Each proton owns RngStream(seed, index), so the
// result is independent of thread count and scheduling. threads = 0 uses the
// hardware concurrency.
RecordTable run_ensemble(const BeamConfig& beam, const PotentialField& field,
                         double length_nm, const PropagationOptions& options,
                         int threads = 0);

// Chunked variant for very large batches: records are produced in contiguous
// index ranges ([base, base + chunk.size())), in order.
void run_ensemble_chunked(
    const BeamConfig& beam, const PotentialField& field, double length_nm,
    const PropagationOptions& options, int threads, std::uint64_t chunk_size,
    const std::function<void(const RecordTable&, std::uint64_t base)>& sink);

// Reduced crystal thickness Lambda = f L / v: crystal length in units of the
// transverse-oscillation wavelength. `calibration` rescales the frequency so
// a user can pin a given (L, Lambda) anchor.
double reduced_thickness(double length_nm, double energy_eV,
                         const PotentialField& field, double calibration = 1.0);

}  // namespace chansim
