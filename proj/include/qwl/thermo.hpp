#pragma once

#include <string>
#include <vector>

#include "qwl/types.hpp"

namespace qwl {

// Ensemble averages from a binned DOS, energies taken at bin centers. The
// estimate must be normalized (see normalize_dos). At beta = 0 the entropy is
// ln(sum of g) and F is NaN.
ThermoCurves thermo_from_dos(const DosEstimate& dos, const BinSpec& bins,
                             const std::vector<double>& beta_grid);

// S(beta_f) = integral from beta_f to infinity of Cv/beta dbeta, evaluated by
// trapezoids on the grid up to beta_cutoff plus one final trapezoid in which
// Cv falls linearly to zero over a single grid interval. Returns S aligned
// with beta_grid.
std::vector<double> entropy_from_cv(const std::vector<double>& beta_grid,
                                    const std::vector<double>& cv, double beta_cutoff);

// F = U - S/beta; every grid point must have beta > 0.
std::vector<double> free_energy(const std::vector<double>& internal_energy,
                                const std::vector<double>& entropy,
                                const std::vector<double>& beta_grid);

// Pointwise method-minus-exact differences; uncertainty bands pass through
// from the method curves.
ThermoCurves error_curves(const ThermoCurves& method, const ThermoCurves& exact);

// CSV columns: beta, U, U_sd, Cv, Cv_sd, S, S_sd, F, F_sd.
void write_curves_csv(const std::string& path, const ThermoCurves& curves);

}  // namespace qwl
