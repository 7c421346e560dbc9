#include "doctest.h"
#include "qwl/hamiltonian.hpp"
#include "test_support.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

using namespace qwl;

namespace {
Spectrum solved(int n, double j, double h, bool vectors = false) {
    return diagonalize(build_tfim(HamiltonianSpec{n, j, h}), vectors);
}
}  // namespace

TEST_SUITE("hamiltonian") {

TEST_CASE("single spin picks up the wrap constant: eigenvalues J +- h") {
    const Spectrum sp = solved(1, 2.0, 1.0);
    REQUIRE(sp.n_states() == 2);
    CHECK(sp.eigenvalues[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(sp.eigenvalues[1] == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("two-spin chain at h=0 doubles its single bond") {
    const Spectrum sp = solved(2, 2.0, 0.0);
    REQUIRE(sp.n_states() == 4);
    CHECK(sp.eigenvalues[0] == doctest::Approx(-4.0));
    CHECK(sp.eigenvalues[1] == doctest::Approx(-4.0));
    CHECK(sp.eigenvalues[2] == doctest::Approx(4.0));
    CHECK(sp.eigenvalues[3] == doctest::Approx(4.0));
}

TEST_CASE("two- and four-spin spectra match the frozen reference solver") {
    const Spectrum sp2 = solved(2, 2.0, 1.0);
    const auto& ref2 = testsup::spectrum_n2_j2_h1();
    for (int i = 0; i < 4; ++i) CHECK(sp2.eigenvalues[i] == doctest::Approx(ref2[i]).epsilon(1e-10));

    const Spectrum sp4 = solved(4, 2.0, 1.0);
    const auto& ref4 = testsup::spectrum_n4_j2_h1();
    REQUIRE(sp4.n_states() == 16);
    for (int i = 0; i < 16; ++i)
        CHECK(sp4.eigenvalues[i] == doctest::Approx(ref4[i]).epsilon(1e-9));
}

TEST_CASE("the Hamiltonian is traceless and symmetric") {
    const auto H = build_tfim(HamiltonianSpec{3, 1.7, 0.6});
    CHECK(std::abs(H.trace()) < 1e-12);
    CHECK((H - H.transpose()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("flipping the field sign leaves the spectrum invariant") {
    const Spectrum a = solved(3, 2.0, 1.0);
    const Spectrum b = solved(3, 2.0, -1.0);
    for (int i = 0; i < a.n_states(); ++i)
        CHECK(a.eigenvalues[i] == doctest::Approx(b.eigenvalues[i]).epsilon(1e-10));
}

TEST_CASE("eigenvectors reconstruct the Hamiltonian") {
    const auto H = build_tfim(HamiltonianSpec{3, 2.0, 1.0});
    const Spectrum sp = diagonalize(H, true);
    REQUIRE(sp.has_eigenvectors());
    const Eigen::MatrixXd rebuilt =
        sp.eigenvectors * sp.eigenvalues.asDiagonal() * sp.eigenvectors.transpose();
    CHECK((H - rebuilt).cwiseAbs().maxCoeff() < 1e-9);
    CHECK(!diagonalize(H, false).has_eigenvectors());
}

TEST_CASE("energy window bounds the spectrum") {
    const HamiltonianSpec spec{4, 2.0, 1.0};
    const EnergyWindow w = energy_window(spec);
    CHECK(w.e_lo == doctest::Approx(-12.0));
    CHECK(w.e_hi == doctest::Approx(12.0));
    const Spectrum sp = solved(4, 2.0, 1.0);
    CHECK(w.contains(sp.eigenvalues[0]));
    CHECK(w.contains(sp.eigenvalues[15]));
}

TEST_CASE("spec validation rejects out-of-range sizes") {
    CHECK_THROWS_AS((HamiltonianSpec{0, 1.0, 1.0}).validate(), std::invalid_argument);
    CHECK_THROWS_AS((HamiltonianSpec{kMaxDenseSpins + 1, 1.0, 1.0}).validate(),
                    std::invalid_argument);
    CHECK_NOTHROW((HamiltonianSpec{4, 2.0, 1.0}).validate());
}

TEST_CASE("exact thermodynamics match the frozen four-spin values") {
    const Spectrum sp = solved(4, 2.0, 1.0);
    const ThermoCurves t = exact_thermo(sp, {0.05, 0.5, 1.0, 3.0});
    // Reference values from the independent solver.
    CHECK(t.internal_energy[0] == doctest::Approx(-1.002342950477).epsilon(1e-9));
    CHECK(t.heat_capacity[0] == doctest::Approx(0.050335948534).epsilon(1e-9));
    CHECK(t.entropy[0] == doctest::Approx(2.747501511569).epsilon(1e-9));
    CHECK(t.free_energy[0] == doctest::Approx(-55.952373181859).epsilon(1e-9));
    CHECK(t.internal_energy[1] == doctest::Approx(-7.744835012946).epsilon(1e-9));
    CHECK(t.heat_capacity[2] == doctest::Approx(0.160930356178).epsilon(1e-9));
    CHECK(t.entropy[3] == doctest::Approx(0.687511361391).epsilon(1e-9));
    CHECK(t.free_energy[3] == doctest::Approx(-8.740561250092).epsilon(1e-9));
}

TEST_CASE("exact thermodynamics obey the defining identities on a grid") {
    const Spectrum sp = solved(3, 2.0, 1.0);
    std::vector<double> grid;
    for (int i = 1; i <= 40; ++i) grid.push_back(0.1 * i);
    const ThermoCurves t = exact_thermo(sp, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        CHECK(t.heat_capacity[i] >= 0.0);
        // F = U - S/beta restated: S = beta (U - F).
        CHECK(t.entropy[i] ==
              doctest::Approx(grid[i] * (t.internal_energy[i] - t.free_energy[i])).epsilon(1e-9));
        if (i > 0) CHECK(t.entropy[i] <= t.entropy[i - 1] + 1e-12);  // S decreases with beta
    }
    // High-beta limits: U -> ground energy, S -> ln(ground degeneracy) = 0.
    const ThermoCurves cold = exact_thermo(sp, {1000.0});
    CHECK(cold.internal_energy[0] == doctest::Approx(sp.eigenvalues[0]).epsilon(1e-9));
    CHECK(cold.entropy[0] == doctest::Approx(0.0).epsilon(1e-6));
    // Zero-beta limit: S -> N ln 2.
    const ThermoCurves hot = exact_thermo(sp, {0.0});
    CHECK(hot.entropy[0] == doctest::Approx(3 * std::numbers::ln2).epsilon(1e-12));
}

TEST_CASE("brute-force DOS counts eigenvalues per bin") {
    const Spectrum sp = solved(2, 2.0, 0.0);  // levels -4, -4, 4, 4
    const BinSpec bins{4, energy_window(HamiltonianSpec{2, 2.0, 0.0})};
    const auto counts = brute_force_dos(sp, bins);
    REQUIRE(counts.size() == 4);
    CHECK(counts[0] == 2);  // [-4, -2)
    CHECK(counts[1] == 0);
    CHECK(counts[2] == 0);
    CHECK(counts[3] == 2);  // top bin, closed at +4
    std::int64_t total = 0;
    for (auto c : counts) total += c;
    CHECK(total == sp.n_states());
}

TEST_CASE("spectrum fixture round-trips through its text format") {
    testsup::TempDir tmp;
    const HamiltonianSpec spec{2, 2.0, 1.0};
    const Spectrum sp = solved(2, 2.0, 1.0);
    const std::string path = tmp.file("spectrum.txt");
    write_spectrum_fixture(path, spec, sp);
    const auto lines = testsup::lines_of(testsup::read_file(path));
    REQUIRE(lines.size() == 5);
    CHECK(lines[0] == "# 2 2 1");
    CHECK(std::stod(lines[1]) == doctest::Approx(-4.472135955).epsilon(1e-12));
    CHECK(std::stod(lines[4]) == doctest::Approx(4.472135955).epsilon(1e-12));
}

}  // TEST_SUITE
