#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "swion/dsp.hpp"
#include "swion/fit.hpp"
#include "swion/synth.hpp"

namespace swion {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A run read back from disk, with the scan labels when present.
struct RunBlock {
  std::optional<std::size_t> point;
  std::optional<std::size_t> run;
  std::optional<double> distance;  // m
  FluorescenceRun data;
};

// Run files: "# bin_ms=<..> scenario=<digest>" then one count per line.
// Scan files prefix each run with "# point=<i> distance_um=<..> run=<j>".
void write_run(std::ostream& os, const FluorescenceRun& run);
void write_scan(std::ostream& os, const std::vector<ScanRun>& runs);
std::vector<RunBlock> read_runs(std::istream& is);

// Envelope CSV: t_s,amplitude,phase_rad,inst_freq_rad_s. Multiple runs are
// separated by "# point=<i> run=<j>" comment lines.
void write_envelope(std::ostream& os, const Envelope& env);

// Scan point CSV: distance_um,power_mean_counts2,power_sem_counts2,n_runs.
void write_scan_points(std::ostream& os, const std::vector<ScanPoint>& points);
std::vector<ScanPoint> read_scan_points(std::istream& is);

/// True when the stream starts with the scan-point CSV header.
bool looks_like_scan_points(const std::string& first_line);

nlohmann::json fit_report(const FitResult& fit, const DerivedQuantities& derived);
nlohmann::json stability_report(const StabilityReport& rep, const std::vector<double>& powers,
                                const WindowSpec& spec, double edge_trim);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& contents);

}  // namespace swion
