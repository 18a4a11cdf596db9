#include "swion/pipeline.hpp"

#include "swion/parallel.hpp"

namespace swion {

std::vector<Envelope> envelopes(const std::vector<const FluorescenceRun*>& runs,
                                const WindowSpec& window) {
  std::vector<Envelope> out(runs.size());
  parallel_for(runs.size(), [&](std::size_t i) { out[i] = analytic_envelope(*runs[i], window); });
  return out;
}

double run_power(const FluorescenceRun& run, const PowerOptions& opt) {
  double p = beat_power(analytic_envelope(run, opt.window), opt.edge_trim);
  if (opt.subtract_noise_floor) p -= noise_floor_power(run, opt.window, opt.edge_trim);
  return p;
}

namespace {

std::vector<double> powers_of(const std::vector<const FluorescenceRun*>& runs, const PowerOptions& opt) {
  std::vector<double> out(runs.size());
  parallel_for(runs.size(), [&](std::size_t i) { out[i] = run_power(*runs[i], opt); });
  return out;
}

}  // namespace

std::vector<ScanPoint> scan_points(const std::vector<ScanRun>& runs, const PowerOptions& opt) {
  std::vector<const FluorescenceRun*> ptrs;
  for (const auto& r : runs) ptrs.push_back(&r.data);
  const auto powers = powers_of(ptrs, opt);
  std::vector<PowerSample> samples;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    samples.push_back({runs[i].point, runs[i].distance, powers[i]});
  }
  return aggregate_powers(samples);
}

std::vector<ScanPoint> scan_points(const std::vector<RunBlock>& runs, const PowerOptions& opt) {
  std::vector<const FluorescenceRun*> ptrs;
  for (const auto& r : runs) {
    if (!r.point || !r.distance) {
      throw std::invalid_argument("scan fitting needs '# point=.. distance_um=..' labels on every run");
    }
    ptrs.push_back(&r.data);
  }
  const auto powers = powers_of(ptrs, opt);
  std::vector<PowerSample> samples;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    samples.push_back({*runs[i].point, *runs[i].distance, powers[i]});
  }
  return aggregate_powers(samples);
}

}  // namespace swion
