#include "qwl/thermo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace qwl {

ThermoCurves thermo_from_dos(const DosEstimate& dos, const BinSpec& bins,
                             const std::vector<double>& beta_grid) {
    if (dos.ln_g.size() != static_cast<std::size_t>(bins.ell))
        throw std::invalid_argument("thermo_from_dos: bin count mismatch");
    if (!dos.normalized)
        throw std::invalid_argument("thermo_from_dos: DOS estimate is not normalized");
    if (beta_grid.empty()) throw std::invalid_argument("thermo_from_dos: empty beta grid");

    std::vector<int> idx;
    for (int i = 0; i < bins.ell; ++i)
        if (dos.visited[i]) {
            if (!std::isfinite(dos.ln_g[i]))
                throw std::invalid_argument("thermo_from_dos: non-finite ln_g on a visited bin");
            idx.push_back(i);
        }
    if (idx.empty()) throw std::invalid_argument("thermo_from_dos: no visited bins");

    ThermoCurves out;
    out.beta = beta_grid;
    for (double beta : beta_grid) {
        if (!(beta >= 0.0)) throw std::invalid_argument("thermo_from_dos: beta must be >= 0");
        double peak = -std::numeric_limits<double>::infinity();
        for (int i : idx) peak = std::max(peak, dos.ln_g[i] - beta * bins.bin_center(i));
        double z = 0.0;
        for (int i : idx) z += std::exp(dos.ln_g[i] - beta * bins.bin_center(i) - peak);
        const double ln_z = peak + std::log(z);
        double u = 0.0, e2 = 0.0;
        for (int i : idx) {
            const double e = bins.bin_center(i);
            const double w = std::exp(dos.ln_g[i] - beta * e - ln_z);
            u += w * e;
            e2 += w * e * e;
        }
        const double var = std::max(0.0, e2 - u * u);
        out.internal_energy.push_back(u);
        out.heat_capacity.push_back(beta * beta * var);
        out.entropy.push_back(ln_z + beta * u);  // at beta = 0 this is ln(sum of g)
        out.free_energy.push_back(beta > 0.0 ? -ln_z / beta
                                             : std::numeric_limits<double>::quiet_NaN());
    }
    return out;
}

std::vector<double> entropy_from_cv(const std::vector<double>& beta_grid,
                                    const std::vector<double>& cv, double beta_cutoff) {
    const std::size_t n = beta_grid.size();
    if (n < 2) throw std::invalid_argument("entropy_from_cv: need at least two grid points");
    if (cv.size() != n) throw std::invalid_argument("entropy_from_cv: grid/cv size mismatch");
    for (std::size_t i = 0; i + 1 < n; ++i)
        if (!(beta_grid[i] < beta_grid[i + 1]))
            throw std::invalid_argument("entropy_from_cv: beta grid must ascend");
    if (!(beta_grid[0] >= 0.0))
        throw std::invalid_argument("entropy_from_cv: beta grid must be nonnegative");

    const double tol = 1e-9 * std::max(1.0, std::abs(beta_cutoff));
    std::size_t cut = 0;
    bool found = false;
    for (std::size_t i = 0; i < n; ++i)
        if (beta_grid[i] <= beta_cutoff + tol) {
            cut = i;
            found = true;
        }
    if (!found) throw std::invalid_argument("entropy_from_cv: cutoff below the grid start");

    // Integrand Cv/beta; at beta = 0 the limit is zero since Cv ~ beta^2.
    auto integrand = [&](std::size_t i) {
        return beta_grid[i] > 0.0 ? cv[i] / beta_grid[i] : 0.0;
    };

    // Truncation: beyond the cutoff Cv is taken to fall linearly to zero over
    // one further grid interval, adding a single trapezoid.
    const double dbeta = cut > 0 ? beta_grid[cut] - beta_grid[cut - 1]
                                 : beta_grid[1] - beta_grid[0];
    const double tail = 0.5 * dbeta * integrand(cut);

    std::vector<double> s(n, 0.0);
    s[cut] = tail;
    for (std::size_t i = cut; i-- > 0;) {
        const double step = beta_grid[i + 1] - beta_grid[i];
        s[i] = s[i + 1] + 0.5 * step * (integrand(i) + integrand(i + 1));
    }
    // Grid points beyond the cutoff lie inside the linear ramp.
    for (std::size_t i = cut + 1; i < n; ++i) {
        const double b = beta_grid[i];
        const double end = beta_grid[cut] + dbeta;
        if (b >= end) {
            s[i] = 0.0;
            continue;
        }
        const double cv_b = cv[cut] * (end - b) / dbeta;
        s[i] = 0.5 * (end - b) * (cv_b / b);
    }
    return s;
}

std::vector<double> free_energy(const std::vector<double>& internal_energy,
                                const std::vector<double>& entropy,
                                const std::vector<double>& beta_grid) {
    const std::size_t n = beta_grid.size();
    if (internal_energy.size() != n || entropy.size() != n)
        throw std::invalid_argument("free_energy: size mismatch");
    std::vector<double> f(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(beta_grid[i] > 0.0))
            throw std::invalid_argument("free_energy: beta must be positive");
        f[i] = internal_energy[i] - entropy[i] / beta_grid[i];
    }
    return f;
}

namespace {
void require_same_grid(const ThermoCurves& a, const ThermoCurves& b) {
    if (a.size() != b.size()) throw std::invalid_argument("curves use different grids");
    for (std::size_t i = 0; i < a.size(); ++i)
        if (std::abs(a.beta[i] - b.beta[i]) > 1e-12)
            throw std::invalid_argument("curves use different grids");
}

std::vector<double> diff(const std::vector<double>& x, const std::vector<double>& y) {
    std::vector<double> d(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) d[i] = x[i] - y[i];
    return d;
}
}  // namespace

ThermoCurves error_curves(const ThermoCurves& method, const ThermoCurves& exact) {
    require_same_grid(method, exact);
    ThermoCurves out;
    out.beta = method.beta;
    out.internal_energy = diff(method.internal_energy, exact.internal_energy);
    out.heat_capacity = diff(method.heat_capacity, exact.heat_capacity);
    out.entropy = diff(method.entropy, exact.entropy);
    out.free_energy = diff(method.free_energy, exact.free_energy);
    out.internal_energy_sd = method.internal_energy_sd;
    out.heat_capacity_sd = method.heat_capacity_sd;
    out.entropy_sd = method.entropy_sd;
    out.free_energy_sd = method.free_energy_sd;
    return out;
}

void write_curves_csv(const std::string& path, const ThermoCurves& curves) {
    std::ofstream file(path);
    if (!file) throw std::runtime_error("write_curves_csv: cannot open " + path);
    file << "beta,U,U_sd,Cv,Cv_sd,S,S_sd,F,F_sd\n";
    auto sd = [](const std::vector<double>& v, std::size_t i) {
        return i < v.size() ? v[i] : 0.0;
    };
    char line[256];
    for (std::size_t i = 0; i < curves.size(); ++i) {
        std::snprintf(line, sizeof line,
                      "%.15g,%.15g,%.15g,%.15g,%.15g,%.15g,%.15g,%.15g,%.15g\n", curves.beta[i],
                      curves.internal_energy[i], sd(curves.internal_energy_sd, i),
                      curves.heat_capacity[i], sd(curves.heat_capacity_sd, i), curves.entropy[i],
                      sd(curves.entropy_sd, i), curves.free_energy[i],
                      sd(curves.free_energy_sd, i));
        file << line;
    }
    if (!file) throw std::runtime_error("write_curves_csv: write failed for " + path);
}

}  // namespace qwl
