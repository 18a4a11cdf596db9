#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "swion/beatmodel.hpp"
#include "swion/constants.hpp"

using namespace swion;
using constants::kTwoPi;

namespace {

TrapConfig default_trap() {
  TrapConfig t;
  t.axial_freq = kTwoPi * 1.24e6;
  t.delta_k_eff = kTwoPi / 267.8e-9;
  t.delta_omega = kTwoPi * 2.0;
  return t;
}

// Widths for the two-ion closed form, computed here from first principles.
std::pair<double, double> pair_widths(const TrapConfig& trap, double temperature) {
  auto width = [&](double w) {
    const double nbar = constants::kBoltzmann * temperature / (constants::kHbar * w);
    return std::sqrt((nbar + 0.5) * constants::kHbar / (2.0 * trap.species.mass * w));
  };
  return {width(trap.axial_freq), width(std::sqrt(3.0) * trap.axial_freq)};
}

}  // namespace

TEST_SUITE("beatmodel") {

TEST_CASE("single ion intensity") {
  BeatParams p{100.0, 40.0, default_trap()};
  CHECK(single_ion_intensity(p, 0.0, 0.0) == doctest::Approx(140.0));
  const double half_period = 0.5 / 2.0;
  CHECK(single_ion_intensity(p, 0.0, half_period) == doctest::Approx(60.0));
  p.modulation = 0.0;
  CHECK(single_ion_intensity(p, 1.3e-7, 0.77) == doctest::Approx(100.0));
  p.modulation = 120.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("two-ion beat: peaks, nulls, cold limit") {
  const TrapConfig trap = default_trap();
  const double lam = trap.lambda_eff();
  const auto peak = two_ion_beat(9.0 * lam, 10e-9, 8e-9, trap);
  CHECK(peak.value == doctest::Approx(peak.envelope).epsilon(1e-12));
  CHECK(std::abs(two_ion_beat(8.75 * lam, 10e-9, 8e-9, trap).value) < 1e-12);
  const auto cold = two_ion_beat(2.3e-6, 0.0, 0.0, trap);
  CHECK(cold.envelope == 1.0);
  CHECK(cold.value == doctest::Approx(std::cos(trap.delta_k_eff * 2.3e-6)).epsilon(1e-14));
  const double dk = trap.delta_k_eff;
  CHECK(peak.envelope == doctest::Approx(std::exp(-0.25 * dk * dk * (1e-16 + 0.64e-16))).epsilon(1e-14));
  CHECK_THROWS_AS(two_ion_beat(0.0, 0.0, 0.0, trap), std::invalid_argument);
}

TEST_CASE("two-ion beat is periodic in l0 with period lambda") {
  const TrapConfig trap = default_trap();
  const double lam = trap.lambda_eff();
  for (double frac : {0.0, 0.13, 0.31, 0.5, 0.77}) {
    const double base = two_ion_beat((9.0 + frac) * lam, 12e-9, 9e-9, trap).value;
    for (int k = 1; k <= 12; ++k) {
      CHECK(std::abs(two_ion_beat((9.0 + frac + k) * lam, 12e-9, 9e-9, trap).value - base) < 1e-12);
    }
  }
}

TEST_CASE("chain beat reduces to the closed form for two ions") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> freq(kTwoPi * 0.5e6, kTwoPi * 2e6);
  std::uniform_real_distribution<double> temp(0.0, 10e-3);
  TrapConfig trap = default_trap();
  for (int i = 0; i < 100; ++i) {
    trap.axial_freq = freq(rng);
    const double t = temp(rng);
    const auto [s0, s1] = pair_widths(trap, t);
    const double l0 = 0.5 * two_ion_spacing(trap);
    const auto a = n_ion_beat(2, trap, t);
    const auto b = two_ion_beat(l0, s0, s1, trap);
    CHECK(std::abs(a.value - b.value) < 1e-12);
    CHECK(std::abs(a.envelope - b.envelope) < 1e-12);
  }
}

TEST_CASE("beat magnitude is bounded by the envelope and falls with temperature") {
  TrapConfig trap = default_trap();
  for (std::size_t n : {1, 3, 4, 7}) {
    double last = 2.0;
    for (double t : {0.0, 1e-3, 4e-3, 20e-3}) {
      const auto b = n_ion_beat(n, trap, t);
      CHECK(std::abs(b.value) <= b.envelope + 1e-15);
      CHECK(b.envelope <= 1.0);
      CHECK(b.envelope < last);
      last = b.envelope;
    }
  }
  CHECK(std::abs(n_ion_beat(4, trap, 10.0).value) < 1e-12);
}

TEST_CASE("frequency sweep agrees with pointwise evaluation") {
  const TrapConfig trap = default_trap();
  const std::vector<double> omegas = {kTwoPi * 0.8e6, kTwoPi * 1.1e6, kTwoPi * 1.5e6};
  for (std::size_t n : {2, 4, 12}) {
    const auto sweep = beat_vs_trap_freq(n, trap, 3.7e-3, omegas);
    for (std::size_t k = 0; k < omegas.size(); ++k) {
      const auto direct = n_ion_beat(n, trap.with_axial_freq(omegas[k]), 3.7e-3);
      CHECK(sweep[k].value == doctest::Approx(direct.value).epsilon(1e-9).scale(1.0));
      CHECK(sweep[k].envelope == doctest::Approx(direct.envelope).epsilon(1e-9));
    }
  }
}

TEST_CASE("Lamb-Dicke parameter") {
  const TrapConfig trap = default_trap();
  const double eta = lamb_dicke(trap);
  CHECK(eta == doctest::Approx(0.237).epsilon(0.001 / 0.237));
  CHECK(lamb_dicke(trap.with_axial_freq(4.0 * trap.axial_freq)) == doctest::Approx(0.5 * eta).epsilon(1e-12));
  const double k2 = eta * eta * 2.0 * trap.species.mass * trap.axial_freq / constants::kHbar;
  CHECK(k2 == doctest::Approx(trap.delta_k_eff * trap.delta_k_eff).epsilon(1e-12));
}

TEST_CASE("stretch drive selects spin parity by spacing") {
  const TrapConfig trap = default_trap();
  const double lam = trap.lambda_eff();
  const SpinPair even{0.5, 0.5};
  const SpinPair odd{0.5, -0.5};
  const double delta = kTwoPi * 1e3;
  double even_half = 0.0, odd_half = 0.0, even_int = 0.0, odd_int = 0.0;
  for (int i = 0; i < 200; ++i) {
    const double t = 5e-6 * i;  // one full drive period
    even_half = std::max(even_half, std::abs(stretch_drive_force(even, 18.5 * lam, trap, delta, t)));
    odd_half = std::max(odd_half, std::abs(stretch_drive_force(odd, 18.5 * lam, trap, delta, t)));
    even_int = std::max(even_int, std::abs(stretch_drive_force(even, 18.0 * lam, trap, delta, t)));
    odd_int = std::max(odd_int, std::abs(stretch_drive_force(odd, 18.0 * lam, trap, delta, t)));
    CHECK(stretch_drive_force({-0.5, -0.5}, 18.5 * lam, trap, delta, t) ==
          doctest::Approx(-stretch_drive_force(even, 18.5 * lam, trap, delta, t)));
    CHECK(stretch_drive_force({0.0, 0.0}, 18.3 * lam, trap, delta, t) == 0.0);
  }
  CHECK(even_half == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(odd_half < 1e-9);
  CHECK(even_int < 1e-9);
  CHECK(odd_int == doctest::Approx(1.0).epsilon(1e-3));
}

}
