// swion: simulate and analyse slowly-moving-standing-wave fluorescence of
// trapped-ion crystals.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "swion/beatmodel.hpp"
#include "swion/config.hpp"
#include "swion/constants.hpp"
#include "swion/crystal.hpp"
#include "swion/dsp.hpp"
#include "swion/fit.hpp"
#include "swion/io.hpp"
#include "swion/pipeline.hpp"
#include "swion/synth.hpp"

namespace {

using namespace swion;
using constants::kTwoPi;

constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;
constexpr int kExitNumerical = 4;

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

void require_positive(double v, const std::string& flag) {
  if (!(v > 0.0) || !std::isfinite(v)) throw UsageError(flag + " must be positive");
}

Config load_config(const std::string& path) {
  if (path.empty()) return {};
  return parse_config(read_file(path));
}

std::string format(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

// ---- spacing --------------------------------------------------------------

struct SpacingArgs {
  double freq_mhz = 0.0;
  double mass_amu = constants::kCa40MassAmu;
};

int run_spacing(const SpacingArgs& a) {
  require_positive(a.freq_mhz, "--freq-mhz");
  require_positive(a.mass_amu, "--mass-amu");
  TrapConfig trap;
  trap.species = IonSpecies::from_amu(a.mass_amu);
  trap.axial_freq = kTwoPi * a.freq_mhz * 1e6;
  trap.delta_k_eff = kTwoPi / 267.8e-9;
  std::cout << format("%.3g", two_ion_spacing(trap) * 1e6) << " um\n";
  return 0;
}

// ---- modes ----------------------------------------------------------------

struct ModesArgs {
  std::size_t ions = 2;
  double freq_mhz = 0.0;
  double mass_amu = constants::kCa40MassAmu;
};

int run_modes(const ModesArgs& a) {
  require_positive(a.freq_mhz, "--freq-mhz");
  require_positive(a.mass_amu, "--mass-amu");
  if (a.ions < 1 || a.ions > kMaxIons) {
    throw UsageError("--ions must be in [1, " + std::to_string(kMaxIons) + "]");
  }
  TrapConfig trap;
  trap.species = IonSpecies::from_amu(a.mass_amu);
  trap.axial_freq = kTwoPi * a.freq_mhz * 1e6;
  trap.delta_k_eff = kTwoPi / 267.8e-9;
  const CrystalModes modes = normal_modes(a.ions, trap);

  std::cout << "# ions=" << a.ions << " length_scale_um=" << format("%.6f", modes.length_scale * 1e6)
            << '\n';
  std::cout << "ion position_um\n";
  for (std::size_t i = 0; i < modes.n_ions; ++i) {
    std::cout << i << ' ' << format("%.6f", modes.positions[i] * 1e6) << '\n';
  }
  std::cout << "mode freq_mhz ratio eigenvector\n";
  for (std::size_t j = 0; j < modes.n_ions; ++j) {
    const double f = modes.mode_freqs[j] / kTwoPi * 1e-6;
    std::cout << j << ' ' << format("%.4f", f) << ' ' << format("%.6f", f / a.freq_mhz);
    for (std::size_t i = 0; i < modes.n_ions; ++i) {
      double a = modes.mode_matrix(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      if (std::abs(a) < 5e-7) a = 0.0;  // no "-0.000000"
      std::cout << ' ' << format("%+.6f", a);
    }
    std::cout << '\n';
  }
  return 0;
}

// ---- simulate -------------------------------------------------------------

struct SimulateArgs {
  std::string config;
  std::string out;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::size_t scan = 0;
  std::size_t runs = 0;
  bool noiseless = false;
};

int run_simulate(const SimulateArgs& a) {
  Config cfg = load_config(a.config);
  if (a.seed_set) cfg.scenario.seed = a.seed;
  if (a.noiseless) cfg.scenario.shot_noise = false;
  cfg.scenario.validate();

  std::ostringstream os;
  if (a.scan > 0 || a.runs > 0) {
    const std::size_t points = a.scan > 0 ? a.scan : cfg.scan.points;
    const std::size_t runs = a.runs > 0 ? a.runs : cfg.scan.runs;
    const auto distances = linspace(cfg.scan.min_distance, cfg.scan.max_distance, points);
    write_scan(os, scan_dataset(cfg.scenario, ScanAxis::kDistance, distances, runs));
  } else {
    write_run(os, generate_run(cfg.scenario));
  }
  write_file(a.out, os.str());
  return 0;
}

// ---- analyze --------------------------------------------------------------

struct AnalyzeArgs {
  std::string config;
  std::string in;
  std::string out;
  std::string stability_out;
  std::optional<double> center_hz;
  std::optional<double> fwhm_hz;
  std::optional<int> order;
  std::optional<double> edge_trim_s;
};

int run_analyze(const AnalyzeArgs& a) {
  Config cfg = load_config(a.config);
  if (a.center_hz) cfg.window.center = *a.center_hz;
  if (a.fwhm_hz) cfg.window.fwhm = *a.fwhm_hz;
  if (a.order) cfg.window.order = *a.order;
  if (a.edge_trim_s) cfg.edge_trim = *a.edge_trim_s;

  std::istringstream is(read_file(a.in));
  const auto blocks = read_runs(is);
  std::vector<const FluorescenceRun*> runs;
  for (const auto& b : blocks) runs.push_back(&b.data);
  const auto envs = envelopes(runs, cfg.window);

  std::ostringstream os;
  std::vector<double> powers;
  for (std::size_t i = 0; i < envs.size(); ++i) {
    if (blocks.size() > 1) {
      os << "# point=" << blocks[i].point.value_or(0) << " run=" << blocks[i].run.value_or(i) << '\n';
    }
    write_envelope(os, envs[i]);
    powers.push_back(beat_power(envs[i], cfg.edge_trim));
  }
  write_file(a.out, os.str());

  const StabilityReport rep = phase_stability(envs, cfg.edge_trim);
  const std::string stab_path = a.stability_out.empty() ? a.out + ".stability.json" : a.stability_out;
  write_file(stab_path, stability_report(rep, powers, cfg.window, cfg.edge_trim).dump(2) + "\n");
  std::cout << "runs=" << envs.size() << " freq_std_rad_s=" << format("%.6g", rep.freq_std)
            << " coherence_time_s=" << format("%.6g", rep.coherence_time) << '\n';
  return 0;
}

// ---- scanfit --------------------------------------------------------------

struct ScanfitArgs {
  std::string config;
  std::string in;
  std::string out;
  std::string points_out;
  std::optional<double> lambda_guess_nm;
  std::optional<double> lambda_span;
  std::optional<double> derive_freq_mhz;
  std::optional<double> mass_amu;
  bool no_noise_floor = false;
};

int run_scanfit(const ScanfitArgs& a) {
  Config cfg = load_config(a.config);
  if (a.lambda_guess_nm) {
    require_positive(*a.lambda_guess_nm, "--lambda-guess-nm");
    cfg.fit.lambda_guess = *a.lambda_guess_nm * 1e-9;
  }
  if (a.lambda_span) cfg.fit.lambda_span = *a.lambda_span;
  if (a.derive_freq_mhz) {
    require_positive(*a.derive_freq_mhz, "--derive-freq-mhz");
    cfg.derive_freq = kTwoPi * *a.derive_freq_mhz * 1e6;
  }
  if (a.mass_amu) cfg.scenario.trap.species = IonSpecies::from_amu(*a.mass_amu);

  const std::string text = read_file(a.in);
  std::vector<ScanPoint> points;
  if (looks_like_scan_points(text.substr(0, text.find('\n')))) {
    std::istringstream is(text);
    points = read_scan_points(is);
  } else {
    std::istringstream is(text);
    const PowerOptions popt{cfg.window, cfg.edge_trim, cfg.subtract_noise_floor && !a.no_noise_floor};
    points = scan_points(read_runs(is), popt);
  }
  if (!a.points_out.empty()) {
    std::ostringstream ps;
    write_scan_points(ps, points);
    write_file(a.points_out, ps.str());
  }

  const IonSpecies& species = cfg.scenario.trap.species;
  const FitResult fit = fit_scan(points, species, cfg.fit);
  const double omega0 = cfg.derive_freq > 0.0 ? cfg.derive_freq : kTwoPi * 1.24e6;
  const DerivedQuantities derived = derive_quantities(fit, omega0, species);
  write_file(a.out, fit_report(fit, derived).dump(2) + "\n");
  std::cout << "lambda_nm=" << format("%.4f", fit.lambda_eff * 1e9) << " +- "
            << format("%.4f", fit.lambda_sigma * 1e9) << " temperature_mk="
            << format("%.4f", fit.temperature * 1e3) << " +- "
            << format("%.4f", fit.temperature_sigma * 1e3)
            << " converged=" << (fit.converged ? "true" : "false") << '\n';
  return fit.converged ? 0 : kExitNumerical;
}

// ---- theocurves -----------------------------------------------------------

struct TheoArgs {
  std::vector<std::size_t> ions = {4, 6, 12};
  double freq_min_mhz = 0.8;
  double freq_max_mhz = 1.5;
  std::size_t points = 701;
  double temperature_mk = 3.7;
  double lambda_nm = 267.8;
  double mass_amu = constants::kCa40MassAmu;
  std::string out;
};

int run_theocurves(const TheoArgs& a) {
  require_positive(a.freq_min_mhz, "--freq-min-mhz");
  require_positive(a.freq_max_mhz, "--freq-max-mhz");
  require_positive(a.lambda_nm, "--lambda-nm");
  if (!(a.freq_max_mhz > a.freq_min_mhz)) throw UsageError("--freq-max-mhz must exceed --freq-min-mhz");
  if (!(a.temperature_mk >= 0.0)) throw UsageError("--temperature-mk must be non-negative");
  if (a.points < 2) throw UsageError("--points must be at least 2");
  for (auto n : a.ions) {
    if (n < 1 || n > kMaxIons) throw UsageError("--ions entries must be in [1, 32]");
  }

  TrapConfig trap;
  trap.species = IonSpecies::from_amu(a.mass_amu);
  trap.axial_freq = kTwoPi * a.freq_min_mhz * 1e6;
  trap.delta_k_eff = kTwoPi / (a.lambda_nm * 1e-9);
  std::vector<double> freqs = linspace(a.freq_min_mhz, a.freq_max_mhz, a.points);
  std::vector<double> omegas;
  for (double f : freqs) omegas.push_back(kTwoPi * f * 1e6);

  std::vector<std::vector<BeatAmplitude>> curves;
  for (auto n : a.ions) curves.push_back(beat_vs_trap_freq(n, trap, a.temperature_mk * 1e-3, omegas));

  std::ostringstream os;
  os << "freq_mhz";
  for (auto n : a.ions) os << ",n" << n << "_value,n" << n << "_envelope";
  os << '\n';
  char buf[64];
  for (std::size_t k = 0; k < freqs.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%.12g", freqs[k]);
    os << buf;
    for (const auto& c : curves) {
      std::snprintf(buf, sizeof buf, ",%.12g,%.12g", c[k].value, c[k].envelope);
      os << buf;
    }
    os << '\n';
  }
  write_file(a.out, os.str());
  return 0;
}

std::string config_key_help() {
  std::string s = "Config file keys (key = value):\n";
  for (const auto& [k, h] : config_keys()) s += "  " + k + "  " + h + "\n";
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Standing-wave fluorescence simulator and analysis toolkit for trapped-ion crystals"};
  app.require_subcommand(1);
  app.footer(config_key_help() + "Environment: SWION_THREADS caps worker threads.\n"
             "Exit codes: 0 success, 2 usage, 3 I/O, 4 numerical failure.");

  SpacingArgs sp;
  auto* spacing = app.add_subcommand("spacing", "Two-ion spacing for a trap frequency");
  spacing->add_option("--freq-mhz", sp.freq_mhz, "Axial trap frequency omega0/2pi [MHz]")->required();
  spacing->add_option("--mass-amu", sp.mass_amu, "Ion mass [u]")->capture_default_str();

  ModesArgs md;
  auto* modes = app.add_subcommand("modes", "Equilibrium positions and axial normal modes");
  modes->add_option("-n,--ions", md.ions, "Number of ions [count]")->capture_default_str();
  modes->add_option("--freq-mhz", md.freq_mhz, "Axial trap frequency omega0/2pi [MHz]")->required();
  modes->add_option("--mass-amu", md.mass_amu, "Ion mass [u]")->capture_default_str();

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Synthesize a photon-count run or a distance scan");
  simulate->add_option("--config", sim.config, "Key-value config file (keys listed below)");
  simulate->add_option("--seed", sim.seed, "Master RNG seed [integer]")->each([&](const std::string&) {
    sim.seed_set = true;
  });
  simulate->add_option("-o,--out", sim.out, "Output run/scan CSV path")->required();
  simulate->add_option("--scan", sim.scan, "Number of scan distances [count]; enables scan mode");
  simulate->add_option("--runs", sim.runs, "Runs per scan distance [count]");
  simulate->add_flag("--noiseless", sim.noiseless, "Write rounded expected counts instead of Poisson draws");

  AnalyzeArgs an;
  auto* analyze = app.add_subcommand("analyze", "Band-pass a run into amplitude/phase envelopes");
  analyze->add_option("--config", an.config, "Key-value config file");
  analyze->add_option("-i,--in", an.in, "Input run or scan CSV")->required();
  analyze->add_option("-o,--out", an.out, "Output envelope CSV")->required();
  analyze->add_option("--stability-out", an.stability_out,
                      "Stability JSON path [default: <out>.stability.json]");
  analyze->add_option("--center-hz", an.center_hz, "Window centre [Hz] (default 2.0)");
  analyze->add_option("--fwhm-hz", an.fwhm_hz, "Window FWHM [Hz] (default 0.3)");
  analyze->add_option("--order", an.order, "Supergaussian order n [integer] (default 4)");
  analyze->add_option("--edge-trim-s", an.edge_trim_s, "Trim at each run edge [s] (default 2)");

  ScanfitArgs sf;
  auto* scanfit = app.add_subcommand("scanfit", "Fit wavelength and temperature to a distance scan");
  scanfit->add_option("--config", sf.config, "Key-value config file");
  scanfit->add_option("-i,--in", sf.in, "Scan CSV (run blocks) or scan-point CSV")->required();
  scanfit->add_option("-o,--out", sf.out, "Output fit report JSON")->required();
  scanfit->add_option("--points-out", sf.points_out, "Also write the per-distance beat powers [CSV]");
  scanfit->add_option("--lambda-guess-nm", sf.lambda_guess_nm, "Wavelength multistart centre [nm] (default 267)");
  scanfit->add_option("--lambda-span", sf.lambda_span, "Relative multistart span [fraction] (default 0.5)");
  scanfit->add_option("--derive-freq-mhz", sf.derive_freq_mhz,
                      "Trap frequency for derived n-bar and eta [MHz] (default 1.24)");
  scanfit->add_option("--mass-amu", sf.mass_amu, "Ion mass [u] (default 39.9625909)");
  scanfit->add_flag("--no-noise-floor", sf.no_noise_floor,
                    "Keep the off-band noise floor in the per-run beat powers");

  TheoArgs th;
  auto* theo = app.add_subcommand("theocurves", "Per-ion beat amplitude versus trap frequency");
  theo->add_option("--ions", th.ions, "Comma-separated ion counts [count]")->delimiter(',')->capture_default_str();
  theo->add_option("--freq-min-mhz", th.freq_min_mhz, "Lowest trap frequency [MHz]")->capture_default_str();
  theo->add_option("--freq-max-mhz", th.freq_max_mhz, "Highest trap frequency [MHz]")->capture_default_str();
  theo->add_option("--points", th.points, "Frequency samples [count]")->capture_default_str();
  theo->add_option("--temperature-mk", th.temperature_mk, "Crystal temperature [mK]")->capture_default_str();
  theo->add_option("--lambda-nm", th.lambda_nm, "Beat-pattern period [nm]")->capture_default_str();
  theo->add_option("--mass-amu", th.mass_amu, "Ion mass [u]")->capture_default_str();
  theo->add_option("-o,--out", th.out, "Output CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "swion: usage error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (*spacing) return run_spacing(sp);
    if (*modes) return run_modes(md);
    if (*simulate) return run_simulate(sim);
    if (*analyze) return run_analyze(an);
    if (*scanfit) return run_scanfit(sf);
    if (*theo) return run_theocurves(th);
  } catch (const IoError& e) {
    std::cerr << "swion: I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const NumericalError& e) {
    std::cerr << "swion: numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::invalid_argument& e) {
    std::cerr << "swion: usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "swion: numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitUsage;
}
