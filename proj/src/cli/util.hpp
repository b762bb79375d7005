#pragma once

#include <filesystem>
#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "commands.hpp"
#include "specrev/spectra.hpp"

namespace specrev::cli {

using Json = nlohmann::ordered_json;

WavenumberAxis axis_of(const PipelineConfig& config);

void ensure_dir(const std::filesystem::path& dir);

/// File name and content hash; paths are left out so reports do not depend
/// on where the inputs live.
Json input_record(const std::filesystem::path& path);

/// Reads each file (single spectrum or matrix layout) and stacks the rows.
/// Rows are resampled onto `target`, or onto the first file's axis.
SpectrumMatrix stack_inputs(const std::vector<std::filesystem::path>& files,
                            const std::optional<WavenumberAxis>& target = std::nullopt);

Json report_header(const Context& ctx, const std::string& command, std::uint64_t seed);

void write_report(const std::filesystem::path& dir, const std::string& stem, const Json& json,
                  const std::string& text);

std::vector<double> to_vector(const Eigen::Ref<const Eigen::RowVectorXd>& row);

}  // namespace specrev::cli
