#pragma once

#include <cstdint>
#include <vector>

namespace qwl {

// Closed energy interval guaranteed to contain the full spectrum.
struct EnergyWindow {
    double e_lo = 0.0;
    double e_hi = 0.0;
    double width() const { return e_hi - e_lo; }
    bool contains(double e) const { return e >= e_lo && e <= e_hi; }
};

// Uniform binning of an energy window. Bin i covers the half-open interval
// [e_lo + i*w, e_lo + (i+1)*w) with w = width/ell; the last bin is closed
// above so e_hi itself is binnable.
struct BinSpec {
    int ell = 1;
    EnergyWindow window;
    double bin_width() const { return window.width() / ell; }
    double bin_center(int i) const { return window.e_lo + (i + 0.5) * bin_width(); }
};

// Maps an energy to its bin. Energies within a small tolerance outside the
// window are clamped to the edge bins; anything further out is an error.
int bin_of(double energy, const BinSpec& bins);

// Running estimate of the log density of states. ln_g is meaningful only
// where visited is set; `normalized` marks that sum over visited bins of
// exp(ln_g) equals the total state count.
struct DosEstimate {
    std::vector<double> ln_g;
    std::vector<std::uint8_t> visited;
    bool normalized = false;
    int n_visited() const;
};

struct Histogram {
    std::vector<std::uint64_t> counts;
};

// Thermodynamic observables on an inverse-temperature grid. The *_sd vectors
// are empty for exact/single-run curves and carry per-point sample standard
// deviations when curves aggregate several runs. free_energy holds NaN where
// beta = 0 (F is undefined there).
struct ThermoCurves {
    std::vector<double> beta;
    std::vector<double> internal_energy;
    std::vector<double> heat_capacity;
    std::vector<double> entropy;
    std::vector<double> free_energy;
    std::vector<double> internal_energy_sd;
    std::vector<double> heat_capacity_sd;
    std::vector<double> entropy_sd;
    std::vector<double> free_energy_sd;
    std::size_t size() const { return beta.size(); }
};

}  // namespace qwl
