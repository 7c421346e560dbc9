#include "qwl/types.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace qwl {

int bin_of(double energy, const BinSpec& bins) {
    if (bins.ell < 1) throw std::invalid_argument("bin_of: ell must be positive");
    const double width = bins.window.width();
    if (!(width > 0.0)) throw std::invalid_argument("bin_of: window must have positive width");
    const double tol = 1e-9 * std::max(1.0, width);
    if (energy < bins.window.e_lo - tol || energy > bins.window.e_hi + tol)
        throw std::domain_error("bin_of: energy " + std::to_string(energy) +
                                " outside window [" + std::to_string(bins.window.e_lo) + ", " +
                                std::to_string(bins.window.e_hi) + "]");
    if (energy >= bins.window.e_hi) return bins.ell - 1;  // top edge closed
    if (energy <= bins.window.e_lo) return 0;
    const int i = static_cast<int>((energy - bins.window.e_lo) / bins.bin_width());
    return std::clamp(i, 0, bins.ell - 1);
}

int DosEstimate::n_visited() const {
    int n = 0;
    for (auto v : visited) n += v != 0;
    return n;
}

}  // namespace qwl
