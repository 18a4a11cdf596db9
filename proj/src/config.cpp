#include "swion/config.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

#include "swion/constants.hpp"

namespace swion {

using constants::kTwoPi;

namespace {

struct KeySpec {
  std::string help;
  std::function<void(Config&, double)> apply;
};

std::size_t as_count(double v, const std::string& key) {
  if (!(v >= 0.0) || v != std::floor(v)) {
    throw std::invalid_argument("config key '" + key + "' needs a non-negative integer");
  }
  return static_cast<std::size_t>(v);
}

const std::map<std::string, KeySpec>& key_table() {
  static const std::map<std::string, KeySpec> table = {
      {"species_mass_amu", {"ion mass in atomic mass units", [](Config& c, double v) {
         c.scenario.trap.species = IonSpecies::from_amu(v);
       }}},
      {"trap_freq_mhz", {"axial trap frequency omega0/2pi in MHz",
                         [](Config& c, double v) { c.scenario.trap.axial_freq = kTwoPi * v * 1e6; }}},
      {"lambda_nm", {"beat-pattern period 2pi/dk_eff in nm",
                     [](Config& c, double v) { c.scenario.trap.delta_k_eff = kTwoPi / (v * 1e-9); }}},
      {"beat_hz", {"beat detuning dw/2pi in Hz",
                   [](Config& c, double v) { c.scenario.trap.delta_omega = kTwoPi * v; }}},
      {"phase_offset_rad", {"interferometer phase offset in rad",
                            [](Config& c, double v) { c.scenario.trap.phase_offset = v; }}},
      {"n_ions", {"number of ions in the chain",
                  [](Config& c, double v) { c.scenario.n_ions = as_count(v, "n_ions"); }}},
      {"temperature_mk", {"crystal temperature in mK",
                          [](Config& c, double v) { c.scenario.temperature = v * 1e-3; }}},
      {"bin_ms", {"detector bin width in ms", [](Config& c, double v) { c.scenario.bin_width = v * 1e-3; }}},
      {"duration_s", {"run duration in s", [](Config& c, double v) { c.scenario.duration = v; }}},
      {"mean_counts_per_bin", {"mean photon counts per bin",
                               [](Config& c, double v) { c.scenario.mean_counts_per_bin = v; }}},
      {"contrast", {"beat contrast B/A before thermal reduction, 0..1",
                    [](Config& c, double v) { c.scenario.contrast = v; }}},
      {"phase_diffusion_rad2_per_s", {"Wiener phase-drift strength in rad^2/s",
                                      [](Config& c, double v) { c.scenario.phase_diffusion = v; }}},
      {"seed", {"master RNG seed", [](Config& c, double v) { c.scenario.seed = as_count(v, "seed"); }}},
      {"shot_noise", {"1 for Poisson counts, 0 for rounded bin means",
                      [](Config& c, double v) { c.scenario.shot_noise = as_count(v, "shot_noise") != 0; }}},
      {"scan_points", {"number of distances in a scan",
                       [](Config& c, double v) { c.scan.points = as_count(v, "scan_points"); }}},
      {"scan_runs", {"runs per scan distance", [](Config& c, double v) { c.scan.runs = as_count(v, "scan_runs"); }}},
      {"scan_min_um", {"smallest scan distance in um", [](Config& c, double v) { c.scan.min_distance = v * 1e-6; }}},
      {"scan_max_um", {"largest scan distance in um", [](Config& c, double v) { c.scan.max_distance = v * 1e-6; }}},
      {"window_center_hz", {"band-pass centre in Hz", [](Config& c, double v) { c.window.center = v; }}},
      {"window_fwhm_hz", {"band-pass FWHM in Hz", [](Config& c, double v) { c.window.fwhm = v; }}},
      {"window_order", {"supergaussian order n", [](Config& c, double v) {
         c.window.order = static_cast<int>(as_count(v, "window_order"));
       }}},
      {"edge_trim_s", {"seconds discarded at each run edge", [](Config& c, double v) { c.edge_trim = v; }}},
      {"noise_floor_subtract", {"1 to subtract the off-band noise floor from scan powers",
                                [](Config& c, double v) {
                                  c.subtract_noise_floor = as_count(v, "noise_floor_subtract") != 0;
                                }}},
      {"fit_lambda_guess_nm", {"centre of the wavelength multistart in nm",
                               [](Config& c, double v) { c.fit.lambda_guess = v * 1e-9; }}},
      {"fit_lambda_span", {"relative multistart span (guess/(1+s) .. guess*(1+s))",
                           [](Config& c, double v) { c.fit.lambda_span = v; }}},
      {"fit_gradient_tol", {"optimizer gradient tolerance", [](Config& c, double v) { c.fit.gradient_tol = v; }}},
      {"fit_step_tol", {"optimizer relative step tolerance", [](Config& c, double v) { c.fit.step_tol = v; }}},
      {"fit_max_iterations", {"optimizer iteration cap", [](Config& c, double v) {
         c.fit.max_iterations = static_cast<int>(as_count(v, "fit_max_iterations"));
       }}},
      {"derive_freq_mhz", {"trap frequency for derived n-bar and eta, MHz",
                           [](Config& c, double v) { c.derive_freq = kTwoPi * v * 1e6; }}},
  };
  return table;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

Config parse_config(const std::string& text, Config base) {
  std::istringstream in(text);
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(raw.substr(0, raw.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = key_table().find(key);
    if (it == key_table().end()) throw std::invalid_argument("unknown config key '" + key + "'");
    if (key == "seed") {
      try {
        std::size_t used = 0;
        base.scenario.seed = std::stoull(value, &used);
        if (used != value.size() || value[0] == '-') throw std::invalid_argument(value);
      } catch (const std::exception&) {
        throw std::invalid_argument("config key 'seed' needs a non-negative integer, got '" + value + "'");
      }
      continue;
    }
    double v = 0.0;
    try {
      std::size_t used = 0;
      v = std::stod(value, &used);
      if (used != value.size()) throw std::invalid_argument(value);
    } catch (const std::exception&) {
      throw std::invalid_argument("config key '" + key + "' has malformed value '" + value + "'");
    }
    if (!std::isfinite(v)) throw std::invalid_argument("config key '" + key + "' must be finite");
    it->second.apply(base, v);
  }
  return base;
}

std::vector<std::pair<std::string, std::string>> config_keys() {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& [k, spec] : key_table()) out.emplace_back(k, spec.help);
  return out;
}

}  // namespace swion
