#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace swion {

/// Thrown when an iterative numerical routine fails to converge or a
/// decomposition breaks down.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct IonSpecies {
  double mass = 0.0;    // kg
  double charge = 0.0;  // C

  static IonSpecies ca40();
  static IonSpecies from_amu(double mass_amu, int charge_state = 1);

  void validate() const;
};

/// Trap and probe-light parameters shared by every physics routine.
struct TrapConfig {
  IonSpecies species = IonSpecies::ca40();
  double axial_freq = 0.0;    // omega_0, rad/s
  double delta_k_eff = 0.0;   // 1/m, projection of k1 - k2 on the trap axis
  double delta_omega = 0.0;   // rad/s, beat detuning of the two beams
  double phase_offset = 0.0;  // rad

  void validate() const;

  /// Beat-pattern period 2 pi / delta_k_eff.
  double lambda_eff() const;
  TrapConfig with_axial_freq(double omega0) const;
};

/// Largest crystal the equilibrium solver accepts.
inline constexpr std::size_t kMaxIons = 32;

struct CrystalModes {
  std::size_t n_ions = 0;
  std::vector<double> positions;   // m, ascending
  std::vector<double> mode_freqs;  // rad/s, ascending
  Eigen::MatrixXd mode_matrix;     // a_ij: row = ion, column = mode
  double length_scale = 0.0;       // m
  IonSpecies species;
};

struct ThermalState {
  double temperature = 0.0;  // K
  std::vector<double> mode_nbars;
  std::vector<double> mode_sigmas;    // m
  std::vector<double> ground_sigmas;  // m
};

/// Characteristic length (q^2 / (4 pi eps0 m omega0^2))^(1/3).
double length_scale(const TrapConfig& trap);

/// Distance 2 l0 between the two ions of a two-ion crystal.
double two_ion_spacing(const TrapConfig& trap);

/// Inverse of two_ion_spacing: the axial frequency giving `spacing`.
double axial_freq_for_spacing(double spacing, const IonSpecies& species);

/// Dimensionless equilibrium positions (units of length_scale) of an
/// n-ion chain. Damped Newton on the potential sum u^2/2 + sum 1/|u_i-u_j|,
/// gradient tolerance 1e-12, at most kEquilibriumMaxIterations steps.
std::vector<double> equilibrium_positions_dimensionless(std::size_t n_ions);

inline constexpr int kEquilibriumMaxIterations = 500;

std::vector<double> equilibrium_positions(std::size_t n_ions, const TrapConfig& trap);

/// Hessian of the dimensionless potential at the given positions.
Eigen::MatrixXd dimensionless_hessian(const std::vector<double>& u);

CrystalModes normal_modes(std::size_t n_ions, const TrapConfig& trap);

ThermalState thermal_state(const CrystalModes& modes, double temperature);

/// Ground-state width sqrt(hbar / 2 m omega) for a mode carrying the
/// single-ion mass.
double ground_sigma(double omega, const IonSpecies& species);

/// Mean occupation k_B T / (hbar omega).
double mean_phonon_number(double omega, double temperature);

}  // namespace swion
