#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "swion/beatmodel.hpp"
#include "swion/crystal.hpp"

namespace swion {

/// Everything needed to synthesize one photon-count run.
struct Scenario {
  TrapConfig trap;
  std::size_t n_ions = 2;
  double temperature = 3.7e-3;       // K
  double bin_width = 0.05;           // s
  double duration = 50.0;            // s
  double mean_counts_per_bin = 50.0;
  double contrast = 1.0;             // B/A before thermal reduction
  double phase_diffusion = 0.0;      // rad^2/s
  std::uint64_t seed = 1;
  bool shot_noise = true;            // false: counts are the rounded bin means

  /// 40Ca+ at 2 pi 1.24 MHz, lambda_eff 267.8 nm, 2 Hz beat, 50 ms bins, 50 s.
  static Scenario defaults();

  void validate() const;
  std::size_t n_bins() const;
  /// Stable 16-hex-digit identifier of the physical parameters and seed.
  std::string digest() const;
};

struct FluorescenceRun {
  double bin_width = 0.0;  // s
  std::vector<std::int64_t> counts;
  std::string scenario_digest = "measured";

  double duration() const { return bin_width * static_cast<double>(counts.size()); }
};

/// Rate model with the crystal's beat contrast evaluated once.
class RateModel {
 public:
  explicit RateModel(const Scenario& scenario);

  /// Expected detection rate in counts/s at time t with interferometer
  /// phase phi_t: baseline (1 + contrast * beat * cos(dw t - phi_t)).
  double rate(double t, double phi_t) const;
  double baseline_rate() const { return baseline_; }
  const BeatAmplitude& beat() const { return beat_; }

 private:
  double baseline_;
  double contrast_;
  double delta_omega_;
  BeatAmplitude beat_;
};

double expected_rate(const Scenario& scenario, double t, double phi_t);

struct TracedRun {
  FluorescenceRun run;
  std::vector<double> phase;  // phi at each bin midpoint, rad
};

/// Poisson counts with mean rate(t_mid) * bin_width per bin. The phase
/// performs a Gaussian random walk with per-bin variance
/// phase_diffusion * bin_width starting from trap.phase_offset.
FluorescenceRun generate_run(const Scenario& scenario);
TracedRun generate_run_traced(const Scenario& scenario);

enum class ScanAxis { kDistance, kFrequency };

struct ScanRun {
  std::size_t point = 0;
  std::size_t run = 0;
  double distance = 0.0;    // m, two-ion spacing at this point
  double axial_freq = 0.0;  // rad/s
  FluorescenceRun data;
};

/// Runs over a list of ion distances (m) or axial frequencies (rad/s).
/// Seeds derive from (base.seed, point, run), so the output does not depend
/// on the number of worker threads.
std::vector<ScanRun> scan_dataset(const Scenario& base, ScanAxis axis,
                                  const std::vector<double>& values, std::size_t runs_per_point);

/// `count` distances evenly spaced over [lo, hi].
std::vector<double> linspace(double lo, double hi, std::size_t count);

}  // namespace swion
