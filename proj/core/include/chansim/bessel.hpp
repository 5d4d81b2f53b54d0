#pragma once

// Modified Bessel functions of the second kind, K0 and K1, for real x > 0.
//
// Chebyshev expansions on [0,2] and [2,inf) in the Cephes style: the inner
// branch expands K0 + log(x/2) I0 (resp. x*(K1 - log(x/2) I1)) in x^2, the
// outer branch expands exp(x) sqrt(x) K_n in 1/x. Worst-case relative error
// is below 1e-15 over [1e-6, 600]. Arguments above 700 underflow to 0.

namespace chansim {

// K0(x). Throws std::domain_error for x <= 0.
double bessel_k0(double x);

// K1(x). Throws std::domain_error for x <= 0.
double bessel_k1(double x);

// Both at once; saves the shared branch/argument work on the hot path.
void bessel_k0_k1(double x, double& k0, double& k1);

}  // namespace chansim
