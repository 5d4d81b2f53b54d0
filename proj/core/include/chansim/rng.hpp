#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace chansim {

// Philox4x64-10 counter-based generator. A block is a pure function of
// (key, counter), so a stream keyed by (master seed, proton index) yields
// the same draw sequence no matter which thread runs it or in what order.
// Matches the reference Philox4x64 outputs (e.g. numpy.random.Philox).
struct Philox4x64 {
    static constexpr std::uint64_t mult0 = 0xD2E7470EE14C6C93ULL;
    static constexpr std::uint64_t mult1 = 0xCA5A826395121157ULL;
    static constexpr std::uint64_t weyl0 = 0x9E3779B97F4A7C15ULL;
    static constexpr std::uint64_t weyl1 = 0xBB67AE8584CAA73BULL;

    static std::array<std::uint64_t, 4> block(std::array<std::uint64_t, 2> key,
                                              std::array<std::uint64_t, 4> ctr) {
        auto round = [](std::array<std::uint64_t, 4>& c,
                        const std::array<std::uint64_t, 2>& k) {
            const unsigned __int128 p0 = static_cast<unsigned __int128>(mult0) * c[0];
            const unsigned __int128 p1 = static_cast<unsigned __int128>(mult1) * c[2];
            const auto lo0 = static_cast<std::uint64_t>(p0);
            const auto hi0 = static_cast<std::uint64_t>(p0 >> 64);
            const auto lo1 = static_cast<std::uint64_t>(p1);
            const auto hi1 = static_cast<std::uint64_t>(p1 >> 64);
            c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
        };
        for (int r = 0; r < 10; ++r) {
            round(ctr, key);
            key[0] += weyl0;
            key[1] += weyl1;
        }
        return ctr;
    }
};

// One independent stream of uniforms/gaussians per (seed, stream id).
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream)
        : key_{seed, stream} {}

    std::uint64_t next_u64() {
        if (pos_ == 4) refill();
        return buf_[pos_++];
    }

    // uniform in [0, 1)
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // uniform in [lo, hi)
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // standard normal, Box-Muller; draws two uniforms per pair
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        // u1 in (0, 1] so the log is finite
        const double u1 =
            (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.28318530717958647692 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

private:
    void refill() {
        buf_ = Philox4x64::block(key_, {ctr_lo_, ctr_hi_, 0, 0});
        if (++ctr_lo_ == 0) ++ctr_hi_;
        pos_ = 0;
    }

    std::array<std::uint64_t, 2> key_;
    std::uint64_t ctr_lo_ = 0, ctr_hi_ = 0;
    std::array<std::uint64_t, 4> buf_{};
    int pos_ = 4;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace chansim
