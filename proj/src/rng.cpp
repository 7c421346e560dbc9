#include "qwl/rng.hpp"

#include <stdexcept>

namespace qwl {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream, std::uint64_t a,
                          std::uint64_t b) {
    std::uint64_t s = splitmix64(base);
    s = splitmix64(s ^ (0x9E3779B97F4A7C15ull * (stream + 1)));
    s = splitmix64(s ^ (0xC2B2AE3D27D4EB4Full * (a + 1)));
    s = splitmix64(s ^ (0x165667B19E3779F9ull * (b + 1)));
    return s;
}

std::uint64_t Rng::uniform_index(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("uniform_index: n must be positive");
    const std::uint64_t limit = ~std::uint64_t{0} - ~std::uint64_t{0} % n;
    std::uint64_t x;
    do {
        x = next();
    } while (x >= limit);
    return x % n;
}

}  // namespace qwl
