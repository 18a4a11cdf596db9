#include "swion/dsp.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numeric>
#include <stdexcept>

#include "swion/constants.hpp"

namespace swion {

using constants::kTwoPi;

void WindowSpec::validate() const {
  if (!(fwhm > 0.0)) throw std::invalid_argument("window FWHM must be positive");
  if (order < 1) throw std::invalid_argument("window order must be >= 1");
  if (!(center > fwhm)) throw std::invalid_argument("window centre must exceed its FWHM");
}

double WindowSpec::sigma() const {
  return fwhm / (2.0 * std::pow(2.0 * std::log(2.0), 1.0 / (2.0 * order)));
}

std::vector<double> supergaussian_window(std::span<const double> freq_grid, const WindowSpec& spec) {
  spec.validate();
  const double s = spec.sigma();
  const double two_n = 2.0 * spec.order;
  std::vector<double> w;
  w.reserve(freq_grid.size());
  for (double f : freq_grid) {
    const double x = std::abs(f - spec.center) / s;
    w.push_back(std::exp(-0.5 * std::pow(x, two_n)));
  }
  return w;
}

namespace {

// FFTW's planner is not re-entrant; execution of distinct plans is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

std::size_t next_pow2(std::size_t n) {
  std::size_t m = 1;
  while (m < n) m <<= 1;
  return m;
}

}  // namespace

std::vector<std::complex<double>> fft(std::span<const std::complex<double>> in, bool inverse) {
  if (in.empty()) throw std::invalid_argument("fft of empty input");
  const int n = static_cast<int>(in.size());
  std::vector<std::complex<double>> out(in.begin(), in.end());
  auto* data = reinterpret_cast<fftw_complex*>(out.data());
  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_dft_1d(n, data, data, inverse ? FFTW_BACKWARD : FFTW_FORWARD, FFTW_ESTIMATE);
  }
  if (plan == nullptr) throw std::runtime_error("FFTW planning failed");
  fftw_execute(plan);
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  return out;
}

std::vector<double> unwrap_phase(std::span<const double> wrapped) {
  std::vector<double> out(wrapped.begin(), wrapped.end());
  double offset = 0.0;
  for (std::size_t i = 1; i < out.size(); ++i) {
    const double jump = wrapped[i] - wrapped[i - 1];
    if (jump > std::numbers::pi) {
      offset -= kTwoPi * std::ceil((jump - std::numbers::pi) / kTwoPi);
    } else if (jump < -std::numbers::pi) {
      offset += kTwoPi * std::ceil((-jump - std::numbers::pi) / kTwoPi);
    }
    out[i] = wrapped[i] + offset;
  }
  return out;
}

namespace {

// Mean-removed, zero-padded forward transform of a run.
struct Spectrum {
  std::vector<std::complex<double>> bins;
  std::size_t n_samples = 0;
  double bin_width = 0.0;

  double nyquist() const { return 0.5 / bin_width; }
};

Spectrum forward_spectrum(std::span<const double> signal, double bin_width) {
  if (!(bin_width > 0.0)) throw std::invalid_argument("bin width must be positive");
  const std::size_t n = signal.size();
  if (n < 16) throw std::invalid_argument("run too short for envelope analysis (need >= 16 bins)");
  const std::size_t m = next_pow2(n);
  const double mean = std::accumulate(signal.begin(), signal.end(), 0.0) / static_cast<double>(n);
  std::vector<std::complex<double>> buf(m, {0.0, 0.0});
  for (std::size_t i = 0; i < n; ++i) buf[i] = signal[i] - mean;
  return {fft(buf, false), n, bin_width};
}

Envelope envelope_from_spectrum(const Spectrum& sp, const WindowSpec& spec) {
  spec.validate();
  if (!(spec.center < sp.nyquist())) {
    throw std::invalid_argument("window centre must lie below the Nyquist frequency");
  }
  const std::size_t m = sp.bins.size();
  const std::size_t n = sp.n_samples;
  const double bin_width = sp.bin_width;

  // Keep 0 < k < m/2 only; DC, Nyquist and negative frequencies are zeroed.
  const double df = 1.0 / (static_cast<double>(m) * bin_width);
  std::vector<double> freqs(m / 2 - 1);
  for (std::size_t k = 1; k < m / 2; ++k) freqs[k - 1] = static_cast<double>(k) * df;
  const auto weights = supergaussian_window(freqs, spec);
  std::vector<std::complex<double>> filtered(m, {0.0, 0.0});
  for (std::size_t k = 1; k < m / 2; ++k) filtered[k] = sp.bins[k] * weights[k - 1];

  const auto analytic = fft(filtered, true);

  Envelope env;
  env.duration = static_cast<double>(n) * bin_width;
  env.times.resize(n);
  env.amplitude.resize(n);
  std::vector<double> wrapped(n);
  const double inv_m = 1.0 / static_cast<double>(m);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = (static_cast<double>(i) + 0.5) * bin_width;
    const std::complex<double> z = analytic[i] * inv_m;
    env.times[i] = t;
    env.amplitude[i] = 2.0 * std::abs(z);
    wrapped[i] = std::arg(z * std::polar(1.0, -kTwoPi * spec.center * t));
  }
  env.phase = unwrap_phase(wrapped);

  env.inst_freq.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i == 0 ? 0 : i - 1;
    const std::size_t hi = i + 1 == n ? i : i + 1;
    env.inst_freq[i] = (env.phase[hi] - env.phase[lo]) / (static_cast<double>(hi - lo) * bin_width);
  }
  return env;
}

std::vector<double> to_signal(const FluorescenceRun& run) {
  return {run.counts.begin(), run.counts.end()};
}

}  // namespace

Envelope analytic_envelope(std::span<const double> signal, double bin_width, const WindowSpec& spec) {
  spec.validate();
  if (!(spec.center < 0.5 / bin_width)) {
    throw std::invalid_argument("window centre must lie below the Nyquist frequency");
  }
  return envelope_from_spectrum(forward_spectrum(signal, bin_width), spec);
}

std::vector<WindowSpec> off_band_windows(const WindowSpec& spec, double bin_width) {
  spec.validate();
  const double nyquist = 0.5 / bin_width;
  std::vector<WindowSpec> out;
  for (int tenth = 3; tenth <= 8; ++tenth) {
    WindowSpec w = spec;
    w.center = nyquist * tenth / 10.0;
    const bool clear_of_signal = std::abs(w.center - spec.center) > 3.0 * spec.fwhm;
    const bool inside_band = w.center > 2.0 * spec.fwhm && w.center + 2.0 * spec.fwhm < nyquist;
    if (clear_of_signal && inside_band) out.push_back(w);
  }
  return out;
}

double noise_floor_power(std::span<const double> signal, double bin_width, const WindowSpec& spec,
                         double edge_trim) {
  const auto windows = off_band_windows(spec, bin_width);
  if (windows.empty()) throw std::invalid_argument("no off-band room to estimate the noise floor");
  const Spectrum sp = forward_spectrum(signal, bin_width);
  double acc = 0.0;
  for (const auto& w : windows) acc += beat_power(envelope_from_spectrum(sp, w), edge_trim);
  return acc / static_cast<double>(windows.size());
}

double noise_floor_power(const FluorescenceRun& run, const WindowSpec& spec, double edge_trim) {
  return noise_floor_power(to_signal(run), run.bin_width, spec, edge_trim);
}

Envelope analytic_envelope(const FluorescenceRun& run, const WindowSpec& spec) {
  return analytic_envelope(to_signal(run), run.bin_width, spec);
}

namespace {

std::pair<std::size_t, std::size_t> trimmed_range(const Envelope& env, double edge_trim) {
  if (!(edge_trim >= 0.0) || !(2.0 * edge_trim < env.duration)) {
    throw std::invalid_argument("edge trim must be non-negative and below half the run duration");
  }
  std::size_t lo = 0;
  std::size_t hi = env.times.size();
  while (lo < hi && env.times[lo] < edge_trim) ++lo;
  while (hi > lo && env.times[hi - 1] > env.duration - edge_trim) --hi;
  if (lo >= hi) throw std::invalid_argument("edge trim leaves no samples");
  return {lo, hi};
}

}  // namespace

double beat_power(const Envelope& env, double edge_trim) {
  const auto [lo, hi] = trimmed_range(env, edge_trim);
  double acc = 0.0;
  for (std::size_t i = lo; i < hi; ++i) acc += env.amplitude[i] * env.amplitude[i];
  return acc / static_cast<double>(hi - lo);
}

StabilityReport phase_stability(std::span<const Envelope> envelopes, double edge_trim) {
  if (envelopes.empty()) throw std::invalid_argument("phase stability needs at least one envelope");
  double std_sum = 0.0;
  double longest = 0.0;
  for (const Envelope& env : envelopes) {
    const auto [lo, hi] = trimmed_range(env, edge_trim);
    const double count = static_cast<double>(hi - lo);
    const double mean =
        std::accumulate(env.inst_freq.begin() + lo, env.inst_freq.begin() + hi, 0.0) / count;
    double var = 0.0;
    for (std::size_t i = lo; i < hi; ++i) var += (env.inst_freq[i] - mean) * (env.inst_freq[i] - mean);
    std_sum += count > 1.0 ? std::sqrt(var / (count - 1.0)) : 0.0;
    longest = std::max(longest, env.duration);
  }
  StabilityReport rep;
  rep.freq_std = std_sum / static_cast<double>(envelopes.size());
  const double cap = 10.0 * longest;
  rep.coherence_time = rep.freq_std > 1.0 / cap ? 1.0 / rep.freq_std : cap;
  return rep;
}

}  // namespace swion
