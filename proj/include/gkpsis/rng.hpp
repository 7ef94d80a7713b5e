#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>

namespace gkpsis {

namespace detail {
// SplitMix64 finalizer.
inline std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ULL;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return z;
}
inline constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;
}  // namespace detail

// Counter-based generator: Weyl sequence through the SplitMix64 finalizer.
// Identical streams for identical seeds on every platform.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : ctr_(seed) {}

    std::uint64_t next_u64() {
        ctr_ += detail::kGamma;
        return detail::mix64(ctr_);
    }

    // Uniform in [0, bound), rejection sampling keeps it exact.
    std::uint64_t below(std::uint64_t bound) {
        std::uint64_t lim = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
        for (;;) {
            std::uint64_t x = next_u64();
            if (x < lim) return x % bound;
        }
    }

    // 53-bit midpoint grid on (0,1); never 0 or 1, safe under log().
    double uniform01() { return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1p-53; }

    // Box-Muller pair, second value cached.
    double gaussian() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = uniform01();
        double u2 = uniform01();
        double m = std::sqrt(-2.0 * std::log(u1));
        constexpr double two_pi = 6.283185307179586476925286766559;
        spare_ = m * std::sin(two_pi * u2);
        has_spare_ = true;
        return m * std::cos(two_pi * u2);
    }

  private:
    std::uint64_t ctr_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

// Canonical sub-seed derivation: absorb each part through the finalizer chain.
// Every experiment row seed in this codebase comes from this function.
inline std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> parts) {
    std::uint64_t h = detail::mix64(seed + detail::kGamma);
    for (std::uint64_t p : parts) h = detail::mix64(h ^ (p + detail::kGamma));
    return h;
}

}  // namespace gkpsis
