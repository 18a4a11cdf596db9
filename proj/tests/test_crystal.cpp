#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "swion/constants.hpp"
#include "swion/crystal.hpp"

using namespace swion;
using constants::kTwoPi;

namespace {

TrapConfig trap_at(double freq_mhz) {
  TrapConfig t;
  t.axial_freq = kTwoPi * freq_mhz * 1e6;
  t.delta_k_eff = kTwoPi / 267.8e-9;
  return t;
}

}  // namespace

TEST_SUITE("crystal") {

TEST_CASE("two-ion spacing against direct potential minimization") {
  for (double f : {1.24, 0.96, 2.0}) {
    const TrapConfig trap = trap_at(f);
    const double l = length_scale(trap);
    const auto u = oracle::chain_positions(2);
    CHECK(two_ion_spacing(trap) == doctest::Approx((u[1] - u[0]) * l).epsilon(1e-10));
  }
  CHECK(two_ion_spacing(trap_at(1.24)) * 1e6 == doctest::Approx(4.86).epsilon(0.002));
  CHECK(two_ion_spacing(trap_at(0.96)) * 1e6 == doctest::Approx(5.76).epsilon(0.002));
}

TEST_CASE("spacing follows the -2/3 power law") {
  const double r = two_ion_spacing(trap_at(4 * 1.1)) / two_ion_spacing(trap_at(1.1));
  CHECK(r == doctest::Approx(std::pow(4.0, -2.0 / 3.0)).epsilon(1e-12));
}

TEST_CASE("spacing inversion round-trips") {
  const TrapConfig trap = trap_at(1.24);
  const double w = axial_freq_for_spacing(two_ion_spacing(trap), trap.species);
  CHECK(w == doctest::Approx(trap.axial_freq).epsilon(1e-12));
}

TEST_CASE("equilibrium positions match brute-force minimization") {
  for (std::size_t n : {1, 2, 3, 4, 5, 7, 10}) {
    CAPTURE(n);
    const auto mine = equilibrium_positions_dimensionless(n);
    const auto ref = oracle::chain_positions(n);
    REQUIRE(mine.size() == n);
    for (std::size_t i = 0; i < n; ++i) CHECK(mine[i] == doctest::Approx(ref[i]).epsilon(1e-9).scale(1.0));
    for (std::size_t i = 0; i < n; ++i) CHECK(mine[i] == -mine[n - 1 - i]);
  }
  const auto u3 = equilibrium_positions_dimensionless(3);
  CHECK(u3[2] == doctest::Approx(std::cbrt(1.25)).epsilon(1e-12));
}

TEST_CASE("forces vanish at equilibrium for every supported size") {
  for (std::size_t n = 1; n <= kMaxIons; ++n) {
    CAPTURE(n);
    const auto u = equilibrium_positions_dimensionless(n);
    for (std::size_t i = 0; i < n; ++i) {
      double f = -u[i];
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        const double d = u[i] - u[j];
        f += std::copysign(1.0 / (d * d), d);
      }
      CHECK(std::abs(f) < 1e-9);
    }
  }
}

TEST_CASE("chain size limits are rejected") {
  CHECK_THROWS_AS(equilibrium_positions_dimensionless(0), std::invalid_argument);
  CHECK_THROWS_AS(equilibrium_positions_dimensionless(kMaxIons + 1), std::invalid_argument);
}

TEST_CASE("Hessian eigenvalues against Jacobi rotation") {
  for (std::size_t n : {2, 3, 5, 9}) {
    const auto h = dimensionless_hessian(equilibrium_positions_dimensionless(n));
    std::vector<std::vector<double>> rows(n, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) rows[i][j] = h(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    const auto ref = oracle::jacobi_eigenvalues(rows);
    const auto modes = normal_modes(n, trap_at(1.0));
    for (std::size_t j = 0; j < n; ++j) {
      CHECK(modes.mode_freqs[j] / modes.mode_freqs[0] == doctest::Approx(std::sqrt(ref[j])).epsilon(1e-10));
    }
  }
}

TEST_CASE("normal modes: two and three ions") {
  const TrapConfig trap = trap_at(1.24);
  const auto m2 = normal_modes(2, trap);
  CHECK(m2.mode_freqs[0] == doctest::Approx(trap.axial_freq).epsilon(1e-12));
  CHECK(m2.mode_freqs[1] == doctest::Approx(std::sqrt(3.0) * trap.axial_freq).epsilon(1e-12));
  const double r = 1.0 / std::sqrt(2.0);
  CHECK(m2.mode_matrix(0, 0) == doctest::Approx(r));
  CHECK(m2.mode_matrix(1, 0) == doctest::Approx(r));
  CHECK(m2.mode_matrix(0, 1) == doctest::Approx(-r));
  CHECK(m2.mode_matrix(1, 1) == doctest::Approx(r));

  const auto m3 = normal_modes(3, trap);
  CHECK(m3.mode_freqs[1] / trap.axial_freq == doctest::Approx(std::sqrt(3.0)).epsilon(1e-10));
  CHECK(m3.mode_freqs[2] / trap.axial_freq == doctest::Approx(std::sqrt(29.0 / 5.0)).epsilon(1e-10));
}

TEST_CASE("mode matrix is orthogonal and the lowest mode is COM") {
  for (std::size_t n : {1, 4, 8, 16, 32}) {
    CAPTURE(n);
    const auto m = normal_modes(n, trap_at(1.0));
    const Eigen::MatrixXd id = m.mode_matrix.transpose() * m.mode_matrix;
    CHECK((id - Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)))
              .cwiseAbs()
              .maxCoeff() < 1e-12);
    CHECK(m.mode_freqs[0] == doctest::Approx(kTwoPi * 1e6).epsilon(1e-12));
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(m.mode_matrix(static_cast<Eigen::Index>(i), 0) == doctest::Approx(1.0 / std::sqrt(double(n))));
    }
  }
}

TEST_CASE("thermal widths") {
  const TrapConfig trap = trap_at(1.24);
  const auto modes = normal_modes(2, trap);
  const auto cold = thermal_state(modes, 0.0);
  // The width parameter is sqrt(nbar + 1/2) ground widths, so sqrt(1/2) at T = 0.
  for (std::size_t j = 0; j < 2; ++j) {
    CHECK(cold.mode_sigmas[j] == doctest::Approx(cold.ground_sigmas[j] / std::sqrt(2.0)).epsilon(1e-15));
  }
  CHECK(cold.ground_sigmas[0] * 1e9 == doctest::Approx(10.1).epsilon(0.01));

  const auto hot = thermal_state(modes, 3.7e-3);
  CHECK(hot.mode_nbars[0] == doctest::Approx(62.2).epsilon(0.002));
  CHECK(hot.mode_nbars[1] == doctest::Approx(hot.mode_nbars[0] / std::sqrt(3.0)).epsilon(1e-12));
  CHECK(hot.mode_sigmas[1] < hot.mode_sigmas[0]);
  const double s0 = std::sqrt(constants::kHbar / (2.0 * trap.species.mass * trap.axial_freq));
  CHECK(hot.mode_sigmas[0] == doctest::Approx(std::sqrt(hot.mode_nbars[0] + 0.5) * s0).epsilon(1e-14));
  CHECK_THROWS_AS(thermal_state(modes, -1.0), std::invalid_argument);
}

TEST_CASE("two-ion invariants") {
  const TrapConfig trap = trap_at(1.24);
  const auto x = equilibrium_positions(2, trap);
  CHECK(x[1] - x[0] == doctest::Approx(two_ion_spacing(trap)).epsilon(1e-12));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dimensionless_hessian(equilibrium_positions_dimensionless(2)));
  CHECK(std::abs(es.eigenvalues()[0] - 1.0) < 1e-12);
  CHECK(std::abs(es.eigenvalues()[1] - 3.0) < 1e-12);
  for (double w : {kTwoPi * 0.3e6, kTwoPi * 2.5e6}) {
    const double t = 4.2e-3;
    CHECK(mean_phonon_number(w, t) * constants::kHbar * w ==
          doctest::Approx(constants::kBoltzmann * t).epsilon(1e-15));
  }
}

TEST_CASE("eigenvector signs: largest entry positive, last one on ties") {
  for (std::size_t n : {3, 5, 6, 11}) {
    const auto m = normal_modes(n, trap_at(1.0));
    for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(n); ++j) {
      const auto col = m.mode_matrix.col(j);
      const double big = col.cwiseAbs().maxCoeff();
      Eigen::Index last = 0;
      for (Eigen::Index i = 0; i < col.size(); ++i) {
        if (std::abs(col(i)) > big - 1e-9) last = i;
      }
      CHECK(col(last) > 0.0);
    }
  }
}

TEST_CASE("invalid trap parameters are rejected") {
  TrapConfig t = trap_at(1.0);
  t.axial_freq = 0.0;
  CHECK_THROWS_AS(t.validate(), std::invalid_argument);
  t = trap_at(1.0);
  t.delta_k_eff = -1.0;
  CHECK_THROWS_AS(t.validate(), std::invalid_argument);
  CHECK_THROWS_AS(IonSpecies::from_amu(0.0), std::invalid_argument);
}

}
