#include "util.hpp"

#include "specrev/error.hpp"
#include "specrev/io.hpp"

namespace specrev::cli {

WavenumberAxis axis_of(const PipelineConfig& config) {
  return config.axis ? config.axis->build() : WavenumberAxis::instrument_default();
}

void ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::IoError, "cannot create directory " + dir.string() + ": " + ec.message());
}

Json input_record(const std::filesystem::path& path) {
  Json j;
  j["file"] = path.filename().string();
  j["fnv1a64"] = io::hex64(io::fnv1a64(io::read_file(path)));
  return j;
}

SpectrumMatrix stack_inputs(const std::vector<std::filesystem::path>& files,
                            const std::optional<WavenumberAxis>& target) {
  if (files.empty()) throw Error(ErrorKind::InvalidArgument, "no spectrum files given");
  std::vector<Spectrum> rows;
  std::optional<WavenumberAxis> axis = target;
  for (const auto& f : files) {
    const SpectrumMatrix m = read_any_csv(f);
    if (!axis) axis = m.axis();
    for (std::size_t i = 0; i < m.rows(); ++i) {
      Spectrum s = m.row(i);
      rows.push_back(s.axis() == *axis ? std::move(s) : resample(s, *axis));
    }
  }
  return SpectrumMatrix::from_spectra(rows);
}

Json report_header(const Context& ctx, const std::string& command, std::uint64_t seed) {
  Json j;
  j["tool"] = "specrev";
  j["command"] = command;
  j["config_hash"] = config_hash(ctx.config);
  j["seed"] = seed;
  return j;
}

void write_report(const std::filesystem::path& dir, const std::string& stem, const Json& json,
                  const std::string& text) {
  ensure_dir(dir);
  io::write_file_atomic(dir / (stem + ".json"), json.dump(2) + "\n");
  io::write_file_atomic(dir / (stem + ".txt"), text);
}

std::vector<double> to_vector(const Eigen::Ref<const Eigen::RowVectorXd>& row) {
  return {row.data(), row.data() + row.size()};
}

}  // namespace specrev::cli
