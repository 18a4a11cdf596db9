#include "swion/crystal.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include "swion/constants.hpp"

namespace swion {

using namespace constants;

IonSpecies IonSpecies::ca40() { return from_amu(kCa40MassAmu, 1); }

IonSpecies IonSpecies::from_amu(double mass_amu, int charge_state) {
  IonSpecies s{mass_amu * kAtomicMassUnit, charge_state * kElementaryCharge};
  s.validate();
  return s;
}

void IonSpecies::validate() const {
  if (!(mass > 0.0) || !std::isfinite(mass)) {
    throw std::invalid_argument("ion mass must be positive");
  }
  if (!(charge > 0.0) || !std::isfinite(charge)) {
    throw std::invalid_argument("ion charge must be positive");
  }
}

void TrapConfig::validate() const {
  species.validate();
  if (!(axial_freq > 0.0) || !std::isfinite(axial_freq)) {
    throw std::invalid_argument("axial trap frequency must be positive");
  }
  if (!(delta_k_eff > 0.0) || !std::isfinite(delta_k_eff)) {
    throw std::invalid_argument("effective wavevector must be positive");
  }
  if (!(delta_omega >= 0.0) || !std::isfinite(delta_omega)) {
    throw std::invalid_argument("beat detuning must be non-negative");
  }
  if (!std::isfinite(phase_offset)) {
    throw std::invalid_argument("phase offset must be finite");
  }
}

double TrapConfig::lambda_eff() const { return kTwoPi / delta_k_eff; }

TrapConfig TrapConfig::with_axial_freq(double omega0) const {
  TrapConfig t = *this;
  t.axial_freq = omega0;
  return t;
}

namespace {

double coulomb_constant(const IonSpecies& s) {
  return s.charge * s.charge / (4.0 * std::numbers::pi * kVacuumPermittivity);
}

double potential(const std::vector<double>& u) {
  double e = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    e += 0.5 * u[i] * u[i];
    for (std::size_t j = i + 1; j < u.size(); ++j) e += 1.0 / std::abs(u[i] - u[j]);
  }
  return e;
}

Eigen::VectorXd gradient(const std::vector<double>& u) {
  const auto n = static_cast<Eigen::Index>(u.size());
  Eigen::VectorXd g(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double gi = u[i];
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j == i) continue;
      const double d = u[i] - u[j];
      gi -= std::copysign(1.0 / (d * d), d);
    }
    g(i) = gi;
  }
  return g;
}

bool strictly_ascending(const std::vector<double>& u) {
  return std::adjacent_find(u.begin(), u.end(), std::greater_equal<>()) == u.end();
}

}  // namespace

double length_scale(const TrapConfig& trap) {
  trap.validate();
  const double m = trap.species.mass;
  return std::cbrt(coulomb_constant(trap.species) / (m * trap.axial_freq * trap.axial_freq));
}

double two_ion_spacing(const TrapConfig& trap) {
  trap.validate();
  const double m = trap.species.mass;
  return std::cbrt(coulomb_constant(trap.species) * 2.0 /
                   (m * trap.axial_freq * trap.axial_freq));
}

double axial_freq_for_spacing(double spacing, const IonSpecies& species) {
  species.validate();
  if (!(spacing > 0.0) || !std::isfinite(spacing)) {
    throw std::invalid_argument("ion spacing must be positive");
  }
  return std::sqrt(coulomb_constant(species) * 2.0 /
                   (species.mass * spacing * spacing * spacing));
}

std::vector<double> equilibrium_positions_dimensionless(std::size_t n_ions) {
  if (n_ions < 1 || n_ions > kMaxIons) {
    throw std::invalid_argument("ion count must be in [1, " + std::to_string(kMaxIons) +
                                "], got " + std::to_string(n_ions));
  }
  std::vector<double> u(n_ions, 0.0);
  if (n_ions == 1) return u;

  // Uniform chain with the empirical minimum spacing 2.018 N^-0.559.
  const double spacing = 2.018 * std::pow(static_cast<double>(n_ions), -0.559);
  const double mid = 0.5 * static_cast<double>(n_ions - 1);
  for (std::size_t i = 0; i < n_ions; ++i) u[i] = (static_cast<double>(i) - mid) * spacing;

  bool converged = false;
  for (int iter = 0; iter < kEquilibriumMaxIterations; ++iter) {
    const Eigen::VectorXd g = gradient(u);
    if (g.lpNorm<Eigen::Infinity>() < 1e-12) {
      converged = true;
      break;
    }
    const Eigen::LDLT<Eigen::MatrixXd> ldlt(dimensionless_hessian(u));
    Eigen::VectorXd step = -ldlt.solve(g);
    bool newton = true;
    if (ldlt.info() != Eigen::Success || !(ldlt.vectorD().array() > 0.0).all() ||
        !step.allFinite()) {
      step = -g;  // fall back to steepest descent away from convex region
      newton = false;
    }

    const double e0 = potential(u);
    const double slope = g.dot(step);
    const auto shifted = [&](double alpha) {
      std::vector<double> t(n_ions);
      for (std::size_t i = 0; i < n_ions; ++i) t[i] = u[i] + alpha * step(static_cast<Eigen::Index>(i));
      return t;
    };
    // An energy test cannot see decreases below its own round-off; tiny
    // damped steps would then stall, so trust the full Newton step.
    const bool below_roundoff = -slope < 64.0 * std::numeric_limits<double>::epsilon() * std::abs(e0);
    bool accepted = false;
    double alpha = 1.0;
    for (int k = 0; k < 40 && !(newton && below_roundoff); ++k, alpha *= 0.5) {
      auto trial = shifted(alpha);
      if (strictly_ascending(trial) && potential(trial) <= e0 + 1e-4 * alpha * slope) {
        u = std::move(trial);
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      // Full step as long as the ordering survives.
      auto trial = shifted(1.0);
      if (!strictly_ascending(trial)) break;
      u = std::move(trial);
    }
  }
  if (!converged) {
    throw NumericalError("equilibrium solver did not converge for N=" + std::to_string(n_ions));
  }

  // Enforce exact reflection symmetry.
  for (std::size_t i = 0; i < n_ions / 2; ++i) {
    const double a = 0.5 * (u[n_ions - 1 - i] - u[i]);
    u[i] = -a;
    u[n_ions - 1 - i] = a;
  }
  if (n_ions % 2 == 1) u[n_ions / 2] = 0.0;
  return u;
}

std::vector<double> equilibrium_positions(std::size_t n_ions, const TrapConfig& trap) {
  const double ell = length_scale(trap);
  auto u = equilibrium_positions_dimensionless(n_ions);
  for (double& x : u) x *= ell;
  return u;
}

Eigen::MatrixXd dimensionless_hessian(const std::vector<double>& u) {
  const auto n = static_cast<Eigen::Index>(u.size());
  Eigen::MatrixXd h = Eigen::MatrixXd::Identity(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      const double c = 2.0 / std::pow(std::abs(u[i] - u[j]), 3);
      h(i, i) += c;
      h(i, j) -= c;
    }
  }
  return h;
}

CrystalModes normal_modes(std::size_t n_ions, const TrapConfig& trap) {
  const double ell = length_scale(trap);
  const auto u = equilibrium_positions_dimensionless(n_ions);

  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(dimensionless_hessian(u));
  if (solver.info() != Eigen::Success) {
    throw NumericalError("Hessian eigen-decomposition failed");
  }

  CrystalModes modes;
  modes.n_ions = n_ions;
  modes.length_scale = ell;
  modes.species = trap.species;
  modes.positions.reserve(n_ions);
  for (double x : u) modes.positions.push_back(x * ell);

  const Eigen::VectorXd& evals = solver.eigenvalues();
  modes.mode_matrix = solver.eigenvectors();
  modes.mode_freqs.reserve(n_ions);
  for (Eigen::Index j = 0; j < evals.size(); ++j) {
    if (!(evals(j) > 0.0)) throw NumericalError("non-positive Hessian eigenvalue");
    modes.mode_freqs.push_back(trap.axial_freq * std::sqrt(evals(j)));

    // Sign convention: the largest-magnitude entry is positive; among
    // entries tied within 1e-9 the last one decides.
    auto col = modes.mode_matrix.col(j);
    const double peak = col.cwiseAbs().maxCoeff();
    Eigen::Index pick = 0;
    for (Eigen::Index i = 0; i < col.size(); ++i) {
      if (std::abs(col(i)) >= peak - 1e-9) pick = i;
    }
    if (col(pick) < 0.0) col *= -1.0;
  }
  return modes;
}

double ground_sigma(double omega, const IonSpecies& species) {
  return std::sqrt(kHbar / (2.0 * species.mass * omega));
}

double mean_phonon_number(double omega, double temperature) {
  return kBoltzmann * temperature / (kHbar * omega);
}

ThermalState thermal_state(const CrystalModes& modes, double temperature) {
  if (!(temperature >= 0.0) || !std::isfinite(temperature)) {
    throw std::invalid_argument("temperature must be non-negative");
  }
  ThermalState st;
  st.temperature = temperature;
  for (double w : modes.mode_freqs) {
    const double nbar = mean_phonon_number(w, temperature);
    const double s0 = ground_sigma(w, modes.species);
    st.mode_nbars.push_back(nbar);
    st.ground_sigmas.push_back(s0);
    st.mode_sigmas.push_back(std::sqrt(nbar + 0.5) * s0);
  }
  return st;
}

}  // namespace swion
