#pragma once

#include <span>
#include <vector>

#include "swion/crystal.hpp"

namespace swion {

struct BeatParams {
  double baseline = 0.0;    // A, counts/s
  double modulation = 0.0;  // B, counts/s
  TrapConfig trap;

  void validate() const;
};

/// Signed beat contrast and the thermal factor it is bounded by.
struct BeatAmplitude {
  double value = 0.0;
  double envelope = 0.0;
};

/// A + B cos(dk x - dw t + dphi) for one ion at position x.
double single_ion_intensity(const BeatParams& params, double x, double t);

/// Two-ion beat contrast cos(dk l0) exp(-(1/4) dk^2 (s0^2 + s1^2)), where l0
/// is half the ion spacing and s0, s1 are the COM and stretch widths.
BeatAmplitude two_ion_beat(double l0, double sigma0, double sigma1, const TrapConfig& trap);

/// Per-ion thermally averaged beat contrast of an N-ion chain:
///   (1/N) sum_i Re(exp(i dk x_i) prod_j exp(-(1/2) dk^2 a_ij^2 s_j^2)).
BeatAmplitude n_ion_beat(const CrystalModes& modes, const ThermalState& thermal,
                         const TrapConfig& trap);

/// Convenience: builds modes and thermal state for (n_ions, trap, T).
BeatAmplitude n_ion_beat(std::size_t n_ions, const TrapConfig& trap, double temperature);

/// n_ion_beat at each axial frequency in `axial_freqs` (rad/s). The
/// dimensionless chain is solved once; positions scale as omega0^(-2/3)
/// and mode frequencies as omega0.
std::vector<BeatAmplitude> beat_vs_trap_freq(std::size_t n_ions, const TrapConfig& trap,
                                             double temperature, std::span<const double> axial_freqs);

/// eta = dk sqrt(hbar / 2 m omega0).
double lamb_dicke(const TrapConfig& trap);

/// Magnetic quantum numbers of the two ions, each +-1/2 (or 0).
struct SpinPair {
  double first = 0.5;
  double second = 0.5;
};

/// Differential force F1 - F2 on a two-ion crystal with ions at -spacing/2
/// and +spacing/2, F_i = sin(dk x_i - delta t + dphi) m_i, unit amplitude.
/// `drive_detuning` is the drive's own detuning delta, independent of the
/// probe's beat detuning.
double stretch_drive_force(SpinPair spins, double spacing, const TrapConfig& trap,
                           double drive_detuning, double t);

}  // namespace swion
