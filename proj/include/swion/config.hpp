#pragma once

#include <string>
#include <vector>

#include "swion/dsp.hpp"
#include "swion/fit.hpp"
#include "swion/synth.hpp"

namespace swion {

struct ScanSettings {
  std::size_t points = 33;
  std::size_t runs = 5;
  double min_distance = 4.5e-6;  // m
  double max_distance = 5.8e-6;  // m
};

/// Everything a workflow needs, in SI units.
struct Config {
  Scenario scenario = Scenario::defaults();
  ScanSettings scan;
  WindowSpec window;
  double edge_trim = kDefaultEdgeTrim;
  bool subtract_noise_floor = true;
  FitOptions fit;
  double derive_freq = 0.0;  // rad/s; 0 selects 2 pi 1.24 MHz
};

/// Parses "key = value" lines ('#' starts a comment). Keys carry their unit
/// (trap_freq_mhz, bin_ms, ...); an unknown key or malformed value raises
/// std::invalid_argument naming the key. Unset keys keep their defaults.
Config parse_config(const std::string& text, Config base = {});

/// Accepted keys with a short description, for help output.
std::vector<std::pair<std::string, std::string>> config_keys();

}  // namespace swion
