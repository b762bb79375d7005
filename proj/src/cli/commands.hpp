#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "specrev/cli.hpp"

namespace specrev::cli {

struct Context {
  PipelineConfig config;
  std::ostream& out;
  std::ostream& err;
};

struct LibAddArgs {
  std::string name, inci, supplier;
  std::vector<std::filesystem::path> files;
  std::vector<double> dilutions;
};

struct IdentifyArgs {
  std::vector<std::filesystem::path> files;
};

struct DesignArgs {
  std::vector<std::string> components;
  std::optional<std::string> kind;
  std::optional<std::string> bounds;
};

struct CalibrateArgs {
  std::filesystem::path design;
  std::vector<std::filesystem::path> spectra;
  std::optional<std::filesystem::path> test_design;
  std::vector<std::filesystem::path> test_spectra;
};

struct QuantifyArgs {
  std::filesystem::path model;
  std::vector<std::filesystem::path> spectra;
  std::optional<std::filesystem::path> reference;
  bool clip = false;
};

struct SynthMaterialArgs {
  std::string name;
  int bands = 6;
  std::optional<std::string> shape;
};

struct SynthMixArgs {
  std::vector<std::filesystem::path> materials;
  std::vector<double> composition;
  std::optional<std::filesystem::path> design;
  double sigma = 0.0;
  std::optional<std::pair<double, double>> vary;
  std::size_t count = 12;
  std::string name = "mixtures";
  std::string diluent = "diluent";
};

int cmd_lib_add(Context& ctx, const LibAddArgs& args);
int cmd_lib_list(Context& ctx);
int cmd_lib_show(Context& ctx, const std::string& name);
int cmd_identify(Context& ctx, const IdentifyArgs& args);
int cmd_design(Context& ctx, const DesignArgs& args);
int cmd_calibrate(Context& ctx, const CalibrateArgs& args);
int cmd_quantify(Context& ctx, const QuantifyArgs& args);
int cmd_synth_material(Context& ctx, const SynthMaterialArgs& args);
int cmd_synth_mix(Context& ctx, const SynthMixArgs& args);

}  // namespace specrev::cli
