#pragma once

#include <cstdint>
#include <random>

namespace qwl {

std::uint64_t splitmix64(std::uint64_t x);

// Seed splitting rule: every chain draws its seed from the experiment's
// base_seed through splitmix64 so that nearby (base, stream, a, b) tuples
// give uncorrelated engine states. Streams in use:
//   1 = Wang-Landau chain, a = run index
//   2 = Metropolis chain, a = run index, b = beta grid index
//   3 = validation battery
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream,
                          std::uint64_t a = 0, std::uint64_t b = 0);

// mt19937_64 behind a fixed uniform mapping. The standard distributions are
// implementation-defined, so doubles are built directly from engine output
// to keep runs bit-for-bit reproducible.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    // Uniform in [0, 1) with 53-bit resolution.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Uniform integer in [0, n), rejection-sampled to avoid modulo bias.
    std::uint64_t uniform_index(std::uint64_t n);

  private:
    std::mt19937_64 engine_;
};

}  // namespace qwl
