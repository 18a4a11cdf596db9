#pragma once

#include <complex>
#include <span>
#include <vector>

#include "swion/synth.hpp"

namespace swion {

/// Supergaussian band-pass exp(-(f - center)^(2n) / (2 sigma^(2n))) with
/// sigma chosen so that the full width at half maximum equals `fwhm`.
struct WindowSpec {
  double center = 2.0;  // Hz
  double fwhm = 0.3;    // Hz
  int order = 4;

  void validate() const;
  /// sigma = fwhm / (2 (2 ln 2)^(1/(2n))).
  double sigma() const;
};

inline constexpr double kDefaultEdgeTrim = 2.0;  // s per side

struct Envelope {
  std::vector<double> times;      // s, bin centres
  std::vector<double> amplitude;  // counts per bin
  std::vector<double> phase;      // rad, unwrapped, demodulated at the window centre
  std::vector<double> inst_freq;  // rad/s, deviation from the window centre
  double duration = 0.0;          // s
};

struct StabilityReport {
  double freq_std = 0.0;        // rad/s
  double coherence_time = 0.0;  // s
};

std::vector<double> supergaussian_window(std::span<const double> freq_grid, const WindowSpec& spec);

/// Unnormalized complex DFT (FFTW), forward uses exp(-i...). Length must be
/// non-zero; any length is accepted.
std::vector<std::complex<double>> fft(std::span<const std::complex<double>> in, bool inverse);

/// Removes the mean, zero-pads to the next power of two, keeps only the
/// windowed positive-frequency half of the spectrum and transforms back.
/// Amplitude is 2|z| (one-sided energy restored); the 1/M normalization of
/// the padded inverse transform leaves interior amplitudes unbiased, only
/// the padded edges droop, which the edge trim discards.
///
/// Phase convention: the returned phase is arg(z exp(-2 pi i center t)),
/// so a tone above the window centre has positive inst_freq, and a count
/// rate cos(dw t - dphi(t)) yields phase = -dphi(t).
Envelope analytic_envelope(const FluorescenceRun& run, const WindowSpec& spec);
Envelope analytic_envelope(std::span<const double> signal, double bin_width, const WindowSpec& spec);

/// Mean of amplitude^2 over [edge_trim, duration - edge_trim].
double beat_power(const Envelope& env, double edge_trim = kDefaultEdgeTrim);

/// Mean over envelopes of std(inst_freq) on the trimmed interval; the
/// coherence time is its inverse, capped at 10x the longest run duration.
StabilityReport phase_stability(std::span<const Envelope> envelopes,
                                double edge_trim = kDefaultEdgeTrim);

/// Same-shaped windows placed in signal-free parts of the spectrum (centres
/// at 0.3 .. 0.8 of Nyquist, at least 3 FWHM away from `spec.center`).
std::vector<WindowSpec> off_band_windows(const WindowSpec& spec, double bin_width);

/// Mean beat_power through the off-band windows: the amplitude^2 that
/// broadband detector noise alone contributes to beat_power.
double noise_floor_power(std::span<const double> signal, double bin_width, const WindowSpec& spec,
                         double edge_trim = kDefaultEdgeTrim);
double noise_floor_power(const FluorescenceRun& run, const WindowSpec& spec,
                         double edge_trim = kDefaultEdgeTrim);

std::vector<double> unwrap_phase(std::span<const double> wrapped);

}  // namespace swion
