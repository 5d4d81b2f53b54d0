#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <vector>

#include "chansim/crystal.hpp"

namespace chansim {

// Optional Born-type pair repulsion B/r^n added to each string kernel.
struct BornRepulsion {
    double b = 0.0;  // eV nm^n
    double n = 12.0;
};

enum class FieldEvaluation {
    radial_table,  // quintic-Hermite interpolation in r^2 (hot path)
    exact,         // Bessel sums everywhere
};

struct FieldOptions {
    bool thermal = true;
    std::optional<BornRepulsion> born;
    double strength_scale = 1.0;  // multiplies the potential; 0 gives free drift
    FieldEvaluation evaluation = FieldEvaluation::radial_table;
    std::size_t table_knots = 32768;
    double table_r_split_nm = 0.05;  // below this radius the exact kernel is used
    double table_r_max_nm = 1.6;
};

// Continuum Moliere potential of the channel: per-string kernels, thermal
// averaging, derivatives, and the derived electron density.
//
// Thermal averaging U + (sigma^2/2) Lap U folds into rescaled Moliere
// coefficients, since Lap K0(b r/a) = (b/a)^2 K0(b r/a) away from the axis;
// gradients of the thermally averaged potential are therefore exact K1 sums.
//
// All evaluation methods are const and thread-safe; the interpolation tables
// are built once in the constructor.
class PotentialField {
public:
    explicit PotentialField(ChannelGeometry geometry, FieldOptions options = {});

    // --- exact analysis surface (Bessel sums) ---

    // continuum potential of a single string at radius r (eV); bare Moliere
    // coefficients, plus the Born term when enabled
    double string_potential(double r_nm) const;

    // sum of string_potential over all strings (eV)
    double channel_potential(double x_nm, double y_nm) const;

    struct Hessian {
        double uxx = 0.0;  // eV/nm^2
        double uyy = 0.0;
    };
    // second partial derivatives of channel_potential
    Hessian potential_hessian(double x_nm, double y_nm) const;

    // analytic Laplacian of channel_potential (eV/nm^2)
    double laplacian(double x_nm, double y_nm) const;

    // thermally averaged potential U + (sigma_th^2/2) Lap U (eV)
    double thermal_potential(double x_nm, double y_nm) const;

    // electron density Lap(U^th) / (4 pi e^2), nm^-3
    double electron_density(double x_nm, double y_nm) const;

    // harmonic frequency of transverse motion about the channel axis, Hz;
    // throws if the axial curvature of the dynamic surface is not positive
    double transverse_frequency() const;

    // --- dynamics surface (table-backed unless evaluation == exact) ---
    // U^th when thermal is enabled, U otherwise; this is the surface whose
    // gradient drives trajectories and which enters the transverse energy.

    double dynamic_potential(double x_nm, double y_nm) const;
    void value_and_gradient(double x_nm, double y_nm, double& u_eV,
                            double& ux_eV_nm, double& uy_eV_nm) const;
    // electron density of the dynamic surface at (x, y), nm^-3
    double dynamic_electron_density(double x_nm, double y_nm) const;

    // squared distance to the nearest string (nm^2)
    double nearest_string_sq(double x_nm, double y_nm) const;

    const ChannelGeometry& geometry() const { return geometry_; }
    const FieldOptions& options() const { return options_; }
    double prefactor() const { return prefactor_; }
    const std::array<double, 3>& moliere_alpha() const { return alpha_; }
    const std::array<double, 3>& moliere_beta() const { return beta_; }

private:
    struct RadialTable {
        double s_min = 0.0, s_max = 0.0, inv_ds = 0.0, ds = 0.0;
        std::vector<std::array<double, 6>> coeff;  // quintic in tau per interval
        bool covers(double s) const { return s >= s_min && s < s_max; }
        void eval(double s, double& v, double& dvds) const;
        double value(double s) const;
    };

    enum class Coeffs { bare, folded };

    Hessian hessian_impl(double x, double y, Coeffs c) const;
    double kernel_value(double r, Coeffs c) const;   // eV
    double kernel_dvdr(double r, Coeffs c) const;    // eV/nm
    double kernel_d2vds2(double s, Coeffs c) const;  // eV/nm^4, s = r^2
    double kernel_laplacian(double r, Coeffs c) const;  // eV/nm^2
    void build_tables();

    ChannelGeometry geometry_;
    FieldOptions options_;
    std::array<double, 3> alpha_{0.35, 0.55, 0.10};
    std::array<double, 3> beta_{0.30, 1.20, 6.00};
    std::array<double, 3> alpha_folded_{};  // thermal rescale of alpha
    double prefactor_ = 0.0;                // 2 z1 z2 e^2 / d * strength
    double inv_a_ = 0.0;
    double s_split_ = 0.0;
    RadialTable pot_;  // dynamic-surface kernel, eV vs s
    RadialTable ne_;   // per-string electron density, nm^-3 vs s
};

}  // namespace chansim
