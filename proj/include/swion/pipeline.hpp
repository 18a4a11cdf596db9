#pragma once

#include <vector>

#include "swion/dsp.hpp"
#include "swion/fit.hpp"
#include "swion/io.hpp"
#include "swion/synth.hpp"

namespace swion {

struct PowerOptions {
  WindowSpec window;
  double edge_trim = kDefaultEdgeTrim;
  /// Subtract noise_floor_power from each run's beat power.
  bool subtract_noise_floor = true;
};

/// Beat power of one run under `opt`.
double run_power(const FluorescenceRun& run, const PowerOptions& opt);

/// Beat power of every run, then per-distance mean and standard error.
std::vector<ScanPoint> scan_points(const std::vector<ScanRun>& runs, const PowerOptions& opt = {});
std::vector<ScanPoint> scan_points(const std::vector<RunBlock>& runs, const PowerOptions& opt = {});

/// Envelopes of many runs, computed in parallel, in input order.
std::vector<Envelope> envelopes(const std::vector<const FluorescenceRun*>& runs,
                                const WindowSpec& window);

}  // namespace swion
