#include "swion/beatmodel.hpp"

#include <cmath>

#include "swion/constants.hpp"

namespace swion {

void BeatParams::validate() const {
  trap.validate();
  if (!(modulation >= 0.0) || !(baseline >= modulation)) {
    throw std::invalid_argument("beat parameters need baseline >= modulation >= 0");
  }
}

double single_ion_intensity(const BeatParams& params, double x, double t) {
  const TrapConfig& trap = params.trap;
  return params.baseline +
         params.modulation *
             std::cos(trap.delta_k_eff * x - trap.delta_omega * t + trap.phase_offset);
}

BeatAmplitude two_ion_beat(double l0, double sigma0, double sigma1, const TrapConfig& trap) {
  if (!(l0 > 0.0) || !(sigma0 >= 0.0) || !(sigma1 >= 0.0)) {
    throw std::invalid_argument("two_ion_beat needs l0 > 0 and non-negative widths");
  }
  const double dk = trap.delta_k_eff;
  BeatAmplitude out;
  out.envelope = std::exp(-0.25 * dk * dk * (sigma0 * sigma0 + sigma1 * sigma1));
  out.value = std::cos(dk * l0) * out.envelope;
  return out;
}

BeatAmplitude n_ion_beat(const CrystalModes& modes, const ThermalState& thermal,
                         const TrapConfig& trap) {
  const std::size_t n = modes.n_ions;
  if (n == 0 || modes.positions.size() != n || thermal.mode_sigmas.size() != n ||
      static_cast<std::size_t>(modes.mode_matrix.rows()) != n) {
    throw std::invalid_argument("crystal modes and thermal state are inconsistent");
  }
  const double dk = trap.delta_k_eff;
  const double dk2 = dk * dk;
  double value = 0.0;
  double envelope = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double exponent = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double a = modes.mode_matrix(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      const double s = thermal.mode_sigmas[j];
      exponent += a * a * s * s;
    }
    const double damping = std::exp(-0.5 * dk2 * exponent);
    value += std::cos(dk * modes.positions[i]) * damping;
    envelope += damping;
  }
  return {value / static_cast<double>(n), envelope / static_cast<double>(n)};
}

BeatAmplitude n_ion_beat(std::size_t n_ions, const TrapConfig& trap, double temperature) {
  const CrystalModes modes = normal_modes(n_ions, trap);
  return n_ion_beat(modes, thermal_state(modes, temperature), trap);
}

std::vector<BeatAmplitude> beat_vs_trap_freq(std::size_t n_ions, const TrapConfig& trap,
                                             double temperature, std::span<const double> axial_freqs) {
  const CrystalModes reference = normal_modes(n_ions, trap);
  std::vector<BeatAmplitude> out;
  out.reserve(axial_freqs.size());
  for (double w : axial_freqs) {
    const TrapConfig t = trap.with_axial_freq(w);
    const double ratio = w / trap.axial_freq;
    CrystalModes modes = reference;
    modes.length_scale = length_scale(t);
    const double shrink = modes.length_scale / reference.length_scale;
    for (double& x : modes.positions) x *= shrink;
    for (double& f : modes.mode_freqs) f *= ratio;
    out.push_back(n_ion_beat(modes, thermal_state(modes, temperature), t));
  }
  return out;
}

double lamb_dicke(const TrapConfig& trap) {
  trap.validate();
  return trap.delta_k_eff * ground_sigma(trap.axial_freq, trap.species);
}

double stretch_drive_force(SpinPair spins, double spacing, const TrapConfig& trap,
                           double drive_detuning, double t) {
  const double x1 = -0.5 * spacing;
  const double x2 = 0.5 * spacing;
  const double dk = trap.delta_k_eff;
  const double f1 = std::sin(dk * x1 - drive_detuning * t + trap.phase_offset) * spins.first;
  const double f2 = std::sin(dk * x2 - drive_detuning * t + trap.phase_offset) * spins.second;
  return f1 - f2;
}

}  // namespace swion
