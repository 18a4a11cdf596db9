#include "swion/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace swion {

namespace {

constexpr const char* kPointsHeader = "distance_um,power_mean_counts2,power_sem_counts2,n_runs";

std::string fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

// Value of `key=` inside a comment line, if present.
std::optional<std::string> field(const std::string& line, const std::string& key) {
  const std::string needle = key + "=";
  std::size_t pos = 0;
  while ((pos = line.find(needle, pos)) != std::string::npos) {
    if (pos == 0 || line[pos - 1] == ' ' || line[pos - 1] == '#') {
      const std::size_t start = pos + needle.size();
      const std::size_t end = line.find(' ', start);
      return line.substr(start, end == std::string::npos ? std::string::npos : end - start);
    }
    pos += needle.size();
  }
  return std::nullopt;
}

double parse_double(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw IoError("malformed " + what + ": '" + s + "'");
  }
}

std::size_t parse_index(const std::string& s, const std::string& what) {
  std::size_t v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) throw IoError("malformed " + what + ": '" + s + "'");
  return v;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

void write_run(std::ostream& os, const FluorescenceRun& run) {
  os << "# bin_ms=" << fmt("%.10g", run.bin_width * 1e3) << " scenario=" << run.scenario_digest << '\n';
  for (auto c : run.counts) os << c << '\n';
}

void write_scan(std::ostream& os, const std::vector<ScanRun>& runs) {
  for (const auto& r : runs) {
    os << "# point=" << r.point << " distance_um=" << fmt("%.9f", r.distance * 1e6) << " run=" << r.run
       << '\n';
    write_run(os, r.data);
  }
}

std::vector<RunBlock> read_runs(std::istream& is) {
  std::vector<RunBlock> blocks;
  std::string raw;
  std::size_t line_no = 0;
  bool pending_label = false;
  while (std::getline(is, raw)) {
    ++line_no;
    const std::string line = trim(raw);
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (auto p = field(line, "point")) {
        RunBlock b;
        b.point = parse_index(*p, "point index");
        if (auto r = field(line, "run")) b.run = parse_index(*r, "run index");
        if (auto d = field(line, "distance_um")) b.distance = parse_double(*d, "distance") * 1e-6;
        blocks.push_back(std::move(b));
        pending_label = true;
      } else if (auto bin = field(line, "bin_ms")) {
        if (!pending_label) blocks.emplace_back();
        pending_label = false;
        auto& data = blocks.back().data;
        data.bin_width = parse_double(*bin, "bin_ms") * 1e-3;
        if (!(data.bin_width > 0.0)) throw IoError("bin_ms must be positive");
        data.scenario_digest = field(line, "scenario").value_or("measured");
      }
      continue;
    }
    if (blocks.empty() || pending_label || !(blocks.back().data.bin_width > 0.0)) {
      throw IoError("line " + std::to_string(line_no) + ": counts before a '# bin_ms=' header");
    }
    long long v = 0;
    const auto [p, ec] = std::from_chars(line.data(), line.data() + line.size(), v);
    if (ec != std::errc() || p != line.data() + line.size() || v < 0) {
      throw IoError("line " + std::to_string(line_no) + ": expected a non-negative integer count");
    }
    blocks.back().data.counts.push_back(v);
  }
  if (blocks.empty()) throw IoError("no runs found in input");
  for (const auto& b : blocks) {
    if (b.data.counts.empty()) throw IoError("run block without counts");
  }
  return blocks;
}

void write_envelope(std::ostream& os, const Envelope& env) {
  os << "t_s,amplitude,phase_rad,inst_freq_rad_s\n";
  char buf[160];
  for (std::size_t i = 0; i < env.times.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.6f,%.9g,%.9g,%.9g\n", env.times[i], env.amplitude[i],
                  env.phase[i], env.inst_freq[i]);
    os << buf;
  }
}

void write_scan_points(std::ostream& os, const std::vector<ScanPoint>& points) {
  os << kPointsHeader << '\n';
  char buf[160];
  for (const auto& p : points) {
    std::snprintf(buf, sizeof buf, "%.9f,%.17g,%.17g,%zu\n", p.distance * 1e6, p.power_mean,
                  p.power_sem, p.n_runs);
    os << buf;
  }
}

bool looks_like_scan_points(const std::string& first_line) {
  return trim(first_line) == kPointsHeader;
}

std::vector<ScanPoint> read_scan_points(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || !looks_like_scan_points(line)) {
    throw IoError(std::string("scan point file must start with '") + kPointsHeader + "'");
  }
  std::vector<ScanPoint> out;
  std::size_t line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
    if (cells.size() != 4) throw IoError("line " + std::to_string(line_no) + ": expected 4 columns");
    ScanPoint p;
    p.distance = parse_double(cells[0], "distance_um") * 1e-6;
    p.power_mean = parse_double(cells[1], "power_mean");
    p.power_sem = parse_double(cells[2], "power_sem");
    p.n_runs = parse_index(cells[3], "n_runs");
    out.push_back(p);
  }
  return out;
}

nlohmann::json fit_report(const FitResult& fit, const DerivedQuantities& derived) {
  nlohmann::json j;
  j["lambda_eff_m"] = fit.lambda_eff;
  j["lambda_eff_sigma_m"] = fit.lambda_sigma;
  j["temperature_k"] = fit.temperature;
  j["temperature_sigma_k"] = fit.temperature_sigma;
  j["scale_counts2"] = fit.scale;
  j["scale_sigma_counts2"] = fit.scale_sigma;
  j["uncertainty_kind"] = "1-sigma from linearized covariance";
  j["reduced_chi_square"] = fit.residual_norm;
  j["weighted"] = fit.weighted;
  j["converged"] = fit.converged;
  j["iterations"] = fit.iterations;
  j["n_points"] = fit.n_points;
  j["derived"] = {
      {"omega0_rad_s", derived.omega0},
      {"nbar_com", derived.nbar_com},
      {"nbar_str", derived.nbar_str},
      {"eta", derived.eta},
  };
  return j;
}

nlohmann::json stability_report(const StabilityReport& rep, const std::vector<double>& powers,
                                const WindowSpec& spec, double edge_trim) {
  nlohmann::json j;
  j["freq_std_rad_s"] = rep.freq_std;
  j["coherence_time_s"] = rep.coherence_time;
  j["n_runs"] = powers.size();
  j["beat_power_counts2"] = powers;
  j["window"] = {{"center_hz", spec.center}, {"fwhm_hz", spec.fwhm}, {"order", spec.order}};
  j["edge_trim_s"] = edge_trim;
  return j;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << contents;
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

}  // namespace swion
