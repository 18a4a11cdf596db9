#include "swion/synth.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "swion/constants.hpp"
#include "swion/parallel.hpp"
#include "swion/random.hpp"

namespace swion {

using constants::kTwoPi;

Scenario Scenario::defaults() {
  Scenario s;
  s.trap.species = IonSpecies::ca40();
  s.trap.axial_freq = kTwoPi * 1.24e6;
  s.trap.delta_k_eff = kTwoPi / 267.8e-9;
  s.trap.delta_omega = kTwoPi * 2.0;
  s.trap.phase_offset = 0.0;
  return s;
}

void Scenario::validate() const {
  trap.validate();
  if (n_ions < 1 || n_ions > kMaxIons) throw std::invalid_argument("ion count out of range");
  if (!(temperature >= 0.0)) throw std::invalid_argument("temperature must be non-negative");
  if (!(bin_width > 0.0)) throw std::invalid_argument("bin width must be positive");
  if (!(duration >= bin_width)) throw std::invalid_argument("duration must be at least one bin");
  if (!(mean_counts_per_bin > 0.0)) throw std::invalid_argument("mean counts per bin must be positive");
  if (!(contrast >= 0.0 && contrast <= 1.0)) throw std::invalid_argument("contrast must be in [0, 1]");
  if (!(phase_diffusion >= 0.0)) throw std::invalid_argument("phase diffusion must be non-negative");
}

std::size_t Scenario::n_bins() const {
  return static_cast<std::size_t>(std::llround(duration / bin_width));
}

std::string Scenario::digest() const {
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "m=%.17g q=%.17g w0=%.17g dk=%.17g dw=%.17g ph=%.17g n=%zu T=%.17g bin=%.17g "
                "dur=%.17g mu=%.17g c=%.17g D=%.17g seed=%llu noise=%d",
                trap.species.mass, trap.species.charge, trap.axial_freq, trap.delta_k_eff,
                trap.delta_omega, trap.phase_offset, n_ions, temperature, bin_width, duration,
                mean_counts_per_bin, contrast, phase_diffusion,
                static_cast<unsigned long long>(seed), shot_noise ? 1 : 0);
  // FNV-1a, 64 bit.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const char* p = buf; *p; ++p) {
    h ^= static_cast<unsigned char>(*p);
    h *= 0x100000001b3ULL;
  }
  char out[17];
  std::snprintf(out, sizeof out, "%016llx", static_cast<unsigned long long>(h));
  return out;
}

RateModel::RateModel(const Scenario& scenario)
    : baseline_((scenario.validate(), scenario.mean_counts_per_bin / scenario.bin_width)),
      contrast_(scenario.contrast),
      delta_omega_(scenario.trap.delta_omega),
      beat_(n_ion_beat(scenario.n_ions, scenario.trap, scenario.temperature)) {}

double RateModel::rate(double t, double phi_t) const {
  const double r = baseline_ * (1.0 + contrast_ * beat_.value * std::cos(delta_omega_ * t - phi_t));
  return r > 0.0 ? r : 0.0;
}

double expected_rate(const Scenario& scenario, double t, double phi_t) {
  return RateModel(scenario).rate(t, phi_t);
}

TracedRun generate_run_traced(const Scenario& scenario) {
  const RateModel model(scenario);
  const std::size_t n = scenario.n_bins();
  const double dt = scenario.bin_width;
  const double step_sigma = std::sqrt(scenario.phase_diffusion * dt);

  Sampler sampler(scenario.seed);
  TracedRun out;
  out.run.bin_width = dt;
  out.run.scenario_digest = scenario.digest();
  out.run.counts.reserve(n);
  out.phase.reserve(n);

  double phi = scenario.trap.phase_offset;
  for (std::size_t k = 0; k < n; ++k) {
    if (k > 0 && step_sigma > 0.0) phi += step_sigma * sampler.normal();
    const double t_mid = (static_cast<double>(k) + 0.5) * dt;
    // Midpoint rule; the beat period is 10 bins, so the relative error of
    // the bin mean stays below (dw dt)^2 / 24.
    const double mean = model.rate(t_mid, phi) * dt;
    out.run.counts.push_back(scenario.shot_noise ? sampler.poisson(mean) : std::llround(mean));
    out.phase.push_back(phi);
  }
  return out;
}

FluorescenceRun generate_run(const Scenario& scenario) {
  return generate_run_traced(scenario).run;
}

std::vector<double> linspace(double lo, double hi, std::size_t count) {
  std::vector<double> v(count);
  for (std::size_t i = 0; i < count; ++i) {
    v[i] = count == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
  }
  return v;
}

std::vector<ScanRun> scan_dataset(const Scenario& base, ScanAxis axis,
                                  const std::vector<double>& values, std::size_t runs_per_point) {
  base.validate();
  if (values.empty()) throw std::invalid_argument("scan needs at least one point");
  if (runs_per_point == 0) throw std::invalid_argument("scan needs at least one run per point");
  for (double v : values) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument("scan distances and frequencies must be positive");
    }
  }

  std::vector<ScanRun> out(values.size() * runs_per_point);
  parallel_for(out.size(), [&](std::size_t idx) {
    const std::size_t point = idx / runs_per_point;
    const std::size_t run = idx % runs_per_point;
    Scenario sc = base;
    if (axis == ScanAxis::kDistance) {
      sc.trap.axial_freq = axial_freq_for_spacing(values[point], base.trap.species);
    } else {
      sc.trap.axial_freq = values[point];
    }
    sc.seed = derive_seed(base.seed, point, run);

    ScanRun& slot = out[idx];
    slot.point = point;
    slot.run = run;
    slot.axial_freq = sc.trap.axial_freq;
    slot.distance = axis == ScanAxis::kDistance ? values[point] : two_ion_spacing(sc.trap);
    slot.data = generate_run(sc);
  });
  return out;
}

}  // namespace swion
