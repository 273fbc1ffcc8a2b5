#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>

namespace hsasim {

// splitmix64 finalizer (Steele, Lea & Flood). Used only to turn
// (seed, index) pairs into well-mixed engine seeds.
constexpr std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// Stream derivation: replication streams come from (master_seed, r),
// per-life streams from (replication_seed, i). Pure function of its
// inputs, so work units can run in any order.
constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
    return splitmix64(base + 0x9e3779b97f4a7c15ull * (index + 1));
}

// The study generator: mt19937_64 behind uniform helpers. Bit
// reproducibility is promised within this implementation, not across
// standard libraries (we never touch std::*_distribution).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform on [0, 1) with 53 random bits.
    double next_unit() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    // Uniform integer in [0, n) by rejection, exactly unbiased.
    std::uint64_t below(std::uint64_t n) {
        if (n == 0) throw std::invalid_argument("below(0)");
        const std::uint64_t limit = ~std::uint64_t{0} - ~std::uint64_t{0} % n;
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return x % n;
    }

    // Categorical draw by cumulative walk; returns the last index with
    // positive mass if rounding leaves the tail short.
    std::size_t categorical(std::span<const double> probs) {
        const double u = next_unit();
        double cum = 0.0;
        std::size_t last_positive = 0;
        bool any = false;
        for (std::size_t i = 0; i < probs.size(); ++i) {
            if (probs[i] <= 0.0) continue;
            cum += probs[i];
            last_positive = i;
            any = true;
            if (u < cum) return i;
        }
        if (!any) throw std::invalid_argument("categorical over zero mass");
        return last_positive;
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace hsasim
