#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "chansim/dynamics.hpp"
#include "chansim/ensemble.hpp"

namespace chansim {

enum class Plane { configuration, angular };

struct GridWindow {
    double x_min = 0.0, x_max = 0.0, y_min = 0.0, y_max = 0.0;
    double width_x() const { return x_max - x_min; }
    double width_y() const { return y_max - y_min; }
};

// 2D binned yield over a configuration (nm) or angular (mrad) window.
// Dechanneled records never enter; hits outside the window are tallied.
struct DensityGrid {
    Plane plane = Plane::configuration;
    int nx = 0, ny = 0;
    GridWindow window;
    std::vector<std::uint64_t> counts;  // row-major, iy * nx + ix
    std::uint64_t total = 0;            // channeled records processed
    std::uint64_t out_of_window = 0;

    std::uint64_t at(int ix, int iy) const { return counts[std::size_t(iy) * nx + ix]; }
    void add(double vx, double vy);
    void merge(const DensityGrid& other);
    // marginal along axis 0 (x) or 1 (y)
    std::vector<std::uint64_t> marginal(int axis) const;
};

DensityGrid make_grid(Plane plane, int nx, int ny, const GridWindow& window);
DensityGrid histogram2d(const RecordTable& records, Plane plane, int nx, int ny,
                        const GridWindow& window);
void accumulate(DensityGrid& grid, const RecordTable& records);

enum class SigmaSubspace {
    exit_transverse,  // (x, phi_x, y, phi_y) at exit, nm / rad
    config_x,         // (x_entry, x_exit, Lambda, tilt)
    config_y,
    angular_x,        // (x_entry, phi_x_exit, Lambda, tilt)
    angular_y,
};

// 4x4 second-moment matrix over a phase-space subspace, moments about zero.
struct BeamSigma {
    std::array<double, 16> m{};  // row-major
    std::uint64_t n_samples = 0;
    SigmaSubspace subspace = SigmaSubspace::exit_transverse;
    bool mean_centered = false;
    double at(int i, int j) const { return m[std::size_t(i) * 4 + j]; }
};

// The Lambda/tilt arguments label the batch for the entry-exit subspaces;
// they are ignored for exit_transverse. mean_centered subtracts the sample
// mean (emittance-style) instead of using raw moments.
BeamSigma beam_sigma(const RecordTable& records, SigmaSubspace subspace,
                     double lambda = 0.0, double tilt = 0.0,
                     bool mean_centered = false);

// Exact raw-moment merge of batches (e.g. a multi-tilt scan aggregate).
// Throws if subspaces differ or any input is mean-centered.
BeamSigma merge_sigma(std::span<const BeamSigma> parts);

struct SigmaInvariants {
    double i_prime = 0.0;  // -1/2 Tr(Sigma J Sigma J)
    double sigma4 = 0.0;   // det(Sigma)
};
SigmaInvariants invariants(const BeamSigma& sigma);

// Linearized entry->exit map near a reference trajectory, (x, phi_x, y, phi_y)
// ordering so the symplectic form is block-diagonal.
struct TransferMatrix {
    std::array<double, 16> m{};
    double det = 0.0;
    double symplectic_residual = 0.0;  // max|M~ J M - J|
    double at(int i, int j) const { return m[std::size_t(i) * 4 + j]; }
};

// Central-difference estimate over 8 probe trajectories; dissipation is
// forced off. Throws std::runtime_error if any probe dechannels.
TransferMatrix estimate_transfer_matrix(const PotentialField& field,
                                        double length_nm,
                                        const ProtonState& reference,
                                        double h_pos_nm, double h_ang_rad,
                                        const PropagationOptions& options);

struct JacobianNode {
    double x = 0.0, y = 0.0;   // impact point, nm
    double j = 0.0;            // (mrad/nm)^2
    double sigma = 0.0;        // 1/|J| where defined
    bool caustic = false;      // |J| below threshold; sigma not reported
    bool valid = false;        // all four stencil probes stayed channeled
};

struct JacobianMap {
    int nx = 0, ny = 0;
    GridWindow window;
    std::vector<JacobianNode> nodes;  // row-major
};

// Jacobian of the impact-point -> exit-angle map on a grid of entry points,
// by central differences with stencil half-width h.
JacobianMap jacobian_map(const PotentialField& field, double length_nm,
                         const GridWindow& window, int nx, int ny,
                         double tilt_rad, double h_nm,
                         const PropagationOptions& options,
                         double caustic_eps = 1e-12);

struct FwhmError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Full width at half maximum of the 1D marginal along `axis`, linear
// interpolation between bin centers. Throws FwhmError for flat or
// non-crossing profiles.
double fwhm(const DensityGrid& grid, int axis);

// Local maxima of a marginal with a prominence filter; used for counting
// the splitting structure of angular profiles.
std::vector<int> find_peaks(std::span<const std::uint64_t> h,
                            double min_prominence_fraction,
                            int min_separation_bins);

// Flux-enhancement estimate for the central equipotential contour,
// gamma = ln(A0 k / (pi E phi^2)); +inf at phi = 0, 0 at the boundary tilt
// phi = sqrt(A0 k / (pi E)).
double flux_enhancement(double a0, double e, double phi, double k);

}  // namespace chansim
