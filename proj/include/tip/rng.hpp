#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "tip/errors.hpp"

namespace tip {

// Mixes two 64-bit values into one (splitmix64 finalizer applied to the sum).
// Used to derive per-step / per-stream seeds from a base seed.
inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
    std::uint64_t z = a + 0x9e3779b97f4a7c15ull * (b + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// Deterministic random source. The engine is the standard-specified
// mt19937_64, but all distributions are hand-rolled so that streams are
// byte-identical across platforms and library versions.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform in [0, 1) with 53 random bits.
    double uniform01() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) {
        if (!(lo <= hi)) throw param_error("uniform: lo > hi");
        return lo + (hi - lo) * uniform01();
    }

    // Uniform integer in [lo, hi], both ends included.
    int uniform_int(int lo, int hi) {
        if (lo > hi) throw param_error("uniform_int: lo > hi");
        std::uint64_t span = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo) + 1;
        return lo + static_cast<int>(next_u64() % span);
    }

    // Standard normal via Box-Muller. No cached spare: two engine draws per
    // sample keep the consumption pattern independent of call history.
    double gaussian() {
        double u1 = uniform01();
        double u2 = uniform01();
        if (u1 < 1e-300) u1 = 1e-300;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.141592653589793238462643383279502884 * u2);
    }

    // Standard Gumbel(0, 1) sample: -log(-log(u)).
    double gumbel() {
        double u = uniform01();
        if (u < 1e-300) u = 1e-300;
        return -std::log(-std::log(u));
    }

    // Derives an independent child generator.
    Rng fork(std::uint64_t stream) { return Rng(mix_seed(next_u64(), stream)); }

  private:
    std::mt19937_64 engine_;
};

} // namespace tip
