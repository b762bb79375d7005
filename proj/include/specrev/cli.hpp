#pragma once

// Command-line front end: library management, identification, design,
// calibration, quantification and synthetic data generation.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "specrev/design.hpp"
#include "specrev/spectra.hpp"

namespace specrev::cli {

struct AxisSpec {
  double min = 150.0;
  double max = 3480.0;
  double step = 4.0;

  WavenumberAxis build() const { return WavenumberAxis::uniform(min, max, step); }
};

struct IcaConfig {
  std::size_t blocks = 2;
  std::size_t f_max = 6;
  double threshold = 0.80;
  std::uint64_t seed = 0;
  std::size_t max_iter = 500;
  double tol = 1e-6;
};

struct PipelineConfig {
  std::filesystem::path library_path = "library";
  std::optional<AxisSpec> axis;
  IcaConfig ica;
  double match_threshold = 0.90;
  std::string design_kind = "centroid";
  std::map<std::string, design::Bounds> bounds;
  std::string cv = "auto";
  std::size_t lv_max = 10;
  std::string preprocess = "none";  // none | snv | snv_msc
  bool clip = false;
  std::filesystem::path output_dir = "out";
  std::uint64_t seed = 0;
};

/// Parses `key = value` lines grouped under `[section]` headers. Unknown
/// keys and out-of-range values raise ConfigError.
PipelineConfig parse_config(const std::string& text, const std::string& origin = "config");
PipelineConfig load_config(const std::filesystem::path& path);
void validate(const PipelineConfig& config);

/// Canonical `key=value` text of every setting except paths.
std::string canonical(const PipelineConfig& config);
std::string config_hash(const PipelineConfig& config);

/// "min,max,step".
AxisSpec parse_axis(const std::string& text);
/// "name=lo:hi,name=lo:hi".
std::map<std::string, design::Bounds> parse_bounds(const std::string& text);

/// Runs one command; returns the process exit code (0, 2, 3 or 4).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace specrev::cli
