#include "chansim/bessel.hpp"

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace chansim {
namespace {

// Chebyshev coefficients, f(u) = c0/2 + sum_{k>=1} c_k T_k(u).
// Inner tables: u = x^2/2 - 1 on x in [0,2]. Outer: u = 4/x - 1 on [2,inf).

constexpr double i0_inner[] = {
    3.2058456136159266308,     0.63880962565117701084,
    0.036854859694361757994,   0.00098287812725147983206,
    0.000014983654208927292747, 1.4738449008423846976e-7,
    1.0114797900674825495e-9,  5.1149979020112798134e-12,
    1.9842806226805618733e-14, 6.0905165060589549044e-17,
    1.5157445820083369465e-19,
};

constexpr double i1_inner[] = {
    1.2835179939823748100,     0.14753932014919341906,
    0.0058987426800207883051,  0.00011988137174638708290,
    1.4739165119093126904e-6,  1.2138074968740921606e-8,
    7.1611066927992794695e-11, 3.1748793113101199308e-13,
    1.0962998348773075276e-15, 3.0315021220933554353e-18,
};

constexpr double k0_inner[] = {
    -0.53532739323390276872,   0.34428989992462848689,
    0.035979936515361501627,   0.0012646154114469259234,
    0.000022862121031194517861, 2.5347910790261494573e-7,
    1.9045163772202088590e-9,  1.0349695257633624585e-11,
    4.2598161427910825765e-14, 1.3744654358807508969e-16,
    3.5708965285083735910e-19,
};

constexpr double k1_inner[] = {
    1.5253002273389477705,     -0.35315596077654487567,
    -0.12261118082265714823,   -0.0069757238596398643502,
    -0.00017302889575130520630, -2.4334061415659682350e-6,
    -2.2133876307347258558e-8, -1.4114883926335277611e-10,
    -6.6669016941993290061e-13, -2.4274498505193659339e-15,
    -7.0238634793862875972e-18,
};

constexpr double k0_outer[] = {
    2.4403030820659554547,     -0.031448101311964500543,
    0.0015698838857300533749,  -0.00012849549581627802638,
    0.000013949813718876499364, -1.8317555227191194848e-6,
    2.7668136394450150761e-7,  -4.6604898976879476656e-8,
    8.5740340174142260858e-9,  -1.6975345093890615156e-9,
    3.5773972814003284472e-10, -7.9574892444773970377e-11,
    1.8559491149549265550e-11, -4.5145978833745191751e-12,
    1.1403405882073442347e-12, -2.9800969231481783548e-13,
    8.0328907750683743694e-14, -2.2275133267462963604e-14,
    6.3400764762766459661e-15, -1.8485933779209071694e-15,
    5.5120559994043333649e-16, -1.6782311257549006383e-16,
    5.2103917776435541125e-17, -1.6475805939842632815e-17,
    5.3004337711773357703e-18, -1.7331712005821000263e-18,
    5.7551092028827293467e-19, -1.9390956053183553946e-19,
};

constexpr double k1_outer[] = {
    2.7206261904844426694,     0.10392373657681723844,
    -0.0028578168596227793868, 0.00019521551847135163111,
    -0.000019361979741660829600, 2.4064849478372171171e-6,
    -3.5019606030878125421e-7, 5.7410841254500492923e-8,
    -1.0345762465678097027e-8, 2.0150497551970346161e-9,
    -4.1903547593419255842e-10, 9.2183151876053141258e-11,
    -2.1299678384277910216e-11, 5.1396396734823435404e-12,
    -1.2891739609498229352e-12, 3.3484196660522431201e-13,
    -8.9767051820101460692e-14, 2.4771544242195986813e-14,
    -7.0198370892147688513e-15, 2.0387031662398608799e-15,
    -6.0570472706430178228e-16, 1.8380935752430454256e-16,
    -5.6894628491936483742e-17, 1.7940510478863572914e-17,
    -5.7567444820733024496e-18, 1.8778651901623267386e-18,
    -6.2216452873526091512e-19, 2.0919125269831135809e-19,
};

template <std::size_t N>
inline double clenshaw(const double (&c)[N], double u) {
    double b0 = 0.0;
    double b1 = 0.0;
    for (std::size_t i = N - 1; i >= 1; --i) {
        const double t = 2.0 * u * b0 - b1 + c[i];
        b1 = b0;
        b0 = t;
    }
    return u * b0 - b1 + 0.5 * c[0];
}

[[noreturn]] void throw_domain(const char* fn, double x) {
    throw std::domain_error(std::string(fn) + ": argument must be positive, got " +
                            std::to_string(x));
}

}  // namespace

double bessel_k0(double x) {
    if (!(x > 0.0)) throw_domain("bessel_k0", x);
    if (x <= 2.0) {
        const double u = 0.5 * x * x - 1.0;
        return clenshaw(k0_inner, u) - std::log(0.5 * x) * clenshaw(i0_inner, u);
    }
    if (x > 700.0) return 0.0;
    const double u = 4.0 / x - 1.0;
    return std::exp(-x) / std::sqrt(x) * clenshaw(k0_outer, u);
}

double bessel_k1(double x) {
    if (!(x > 0.0)) throw_domain("bessel_k1", x);
    if (x <= 2.0) {
        const double u = 0.5 * x * x - 1.0;
        const double i1 = x * clenshaw(i1_inner, u);
        return std::log(0.5 * x) * i1 + clenshaw(k1_inner, u) / x;
    }
    if (x > 700.0) return 0.0;
    const double u = 4.0 / x - 1.0;
    return std::exp(-x) / std::sqrt(x) * clenshaw(k1_outer, u);
}

void bessel_k0_k1(double x, double& k0, double& k1) {
    if (!(x > 0.0)) throw_domain("bessel_k0_k1", x);
    if (x <= 2.0) {
        const double u = 0.5 * x * x - 1.0;
        const double lg = std::log(0.5 * x);
        k0 = clenshaw(k0_inner, u) - lg * clenshaw(i0_inner, u);
        k1 = lg * x * clenshaw(i1_inner, u) + clenshaw(k1_inner, u) / x;
        return;
    }
    if (x > 700.0) {
        k0 = 0.0;
        k1 = 0.0;
        return;
    }
    const double u = 4.0 / x - 1.0;
    const double f = std::exp(-x) / std::sqrt(x);
    k0 = f * clenshaw(k0_outer, u);
    k1 = f * clenshaw(k1_outer, u);
}

}  // namespace chansim
