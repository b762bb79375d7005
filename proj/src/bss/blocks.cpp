#include <algorithm>
#include <cmath>
#include <json.hpp>

#include "specrev/bss.hpp"
#include "specrev/error.hpp"
#include "specrev/io.hpp"

namespace specrev::bss {

std::vector<double> match_components(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw Error(ErrorKind::DimensionMismatch, "component sets differ in shape");
  const auto f = static_cast<std::size_t>(a.rows());
  const auto n = static_cast<std::size_t>(a.cols());
  Matrix corr(a.rows(), b.rows());
  for (std::size_t i = 0; i < f; ++i)
    for (std::size_t j = 0; j < f; ++j)
      corr(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = std::abs(
          pearson({a.data() + i * n, n}, {b.data() + j * n, n}));

  std::vector<bool> row_used(f, false);
  std::vector<bool> col_used(f, false);
  std::vector<double> matched;
  for (std::size_t step = 0; step < f; ++step) {
    double best = -1.0;
    std::size_t bi = 0;
    std::size_t bj = 0;
    for (std::size_t i = 0; i < f; ++i) {
      if (row_used[i]) continue;
      for (std::size_t j = 0; j < f; ++j) {
        if (col_used[j]) continue;
        const double c = corr(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        if (c > best) {
          best = c;
          bi = i;
          bj = j;
        }
      }
    }
    row_used[bi] = true;
    col_used[bj] = true;
    matched.push_back(best);
  }
  std::sort(matched.begin(), matched.end(), std::greater<>());
  return matched;
}

IcaByBlocksReport ica_by_blocks(const Matrix& x, const BlocksOptions& opts) {
  const auto s = static_cast<std::size_t>(x.rows());
  const auto n = static_cast<std::size_t>(x.cols());
  const std::size_t b = opts.blocks;
  if (b < 2) throw Error(ErrorKind::InvalidArgument, "ICA by blocks needs at least 2 blocks");
  if (s < 2 * b)
    throw Error(ErrorKind::TooFewSamples, std::to_string(s) + " spectra cannot form " +
                                              std::to_string(b) +
                                              " blocks of at least 2 rows");
  if (opts.f_max < 1 || opts.f_max > std::min(s / b, n))
    throw Error(ErrorKind::TooFewSamples,
                "f_max " + std::to_string(opts.f_max) + " outside [1, " +
                    std::to_string(std::min(s / b, n)) + "] for " + std::to_string(s) +
                    " spectra in " + std::to_string(b) + " blocks");
  if (!(opts.threshold >= 0.0 && opts.threshold <= 1.0))
    throw Error(ErrorKind::InvalidArgument, "ICA by blocks threshold must lie in [0, 1]");

  std::vector<Matrix> blocks;
  for (std::size_t k = 0; k < b; ++k) {
    const std::size_t first = k * s / b;
    const std::size_t last = (k + 1) * s / b;
    blocks.emplace_back(x.middleRows(static_cast<Eigen::Index>(first),
                                     static_cast<Eigen::Index>(last - first)));
  }

  IcaByBlocksReport report;
  report.blocks = b;
  report.threshold = opts.threshold;
  for (std::size_t f = 1; f <= opts.f_max; ++f) {
    report.tested_orders.push_back(f);
    OrderResult row;
    row.f = f;
    std::vector<Matrix> sources;
    try {
      for (std::size_t k = 0; k < b; ++k) {
        IcaOptions o = opts.ica;
        o.seed = opts.ica.seed + 7919 * f + k;
        sources.push_back(fit_infomax(blocks[k], f, o).sources);
      }
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::RankDeficient) throw;
      row.rank_deficient = true;
      row.matched.assign(f, 0.0);
      row.min_correlation = 0.0;
      report.table.push_back(row);
      continue;
    }
    row.matched.assign(f, 1.0);
    for (std::size_t p = 0; p < b; ++p)
      for (std::size_t q = p + 1; q < b; ++q) {
        const auto m = match_components(sources[p], sources[q]);
        for (std::size_t i = 0; i < f; ++i) row.matched[i] = std::min(row.matched[i], m[i]);
      }
    row.min_correlation = *std::min_element(row.matched.begin(), row.matched.end());
    report.table.push_back(row);
  }

  for (const auto& row : report.table)
    if (!row.rank_deficient && row.min_correlation >= opts.threshold) {
      report.optimal_f = row.f;
      report.any_passed = true;
    }
  return report;
}

std::string blocks_table_csv(const IcaByBlocksReport& report) {
  std::string out = "f,ic,matched_abs_corr,min_abs_corr,rank_deficient,passes\n";
  for (const auto& row : report.table) {
    const bool passes = !row.rank_deficient && row.min_correlation >= report.threshold;
    if (row.matched.empty()) {
      out += std::to_string(row.f) + ",,," + io::format_double(row.min_correlation) + "," +
             (row.rank_deficient ? "1" : "0") + ",0\n";
      continue;
    }
    for (std::size_t i = 0; i < row.matched.size(); ++i) {
      out += std::to_string(row.f) + "," + std::to_string(i + 1) + "," +
             io::format_double(row.matched[i]) + "," + io::format_double(row.min_correlation) +
             "," + (row.rank_deficient ? "1" : "0") + "," + (passes ? "1" : "0") + "\n";
    }
  }
  return out;
}

void export_model(const IcaModel& model, const WavenumberAxis& axis,
                  const std::vector<std::string>& sample_labels, const std::filesystem::path& dir,
                  const std::string& stem) {
  std::vector<std::string> ic_labels;
  for (std::size_t k = 0; k < model.components; ++k) ic_labels.push_back("ic_" + std::to_string(k + 1));
  write_matrix_csv(dir / (stem + "_sources.csv"), SpectrumMatrix(axis, model.sources, ic_labels));

  std::string mixing = "sample";
  for (const auto& l : ic_labels) mixing += "," + l;
  mixing += "\n";
  for (Eigen::Index i = 0; i < model.mixing.rows(); ++i) {
    mixing += static_cast<std::size_t>(i) < sample_labels.size()
                  ? io::csv_field(sample_labels[static_cast<std::size_t>(i)])
                  : "sample_" + std::to_string(i + 1);
    for (Eigen::Index k = 0; k < model.mixing.cols(); ++k)
      mixing += "," + io::format_double(model.mixing(i, k));
    mixing += "\n";
  }
  io::write_file_atomic(dir / (stem + "_mixing.csv"), mixing);

  nlohmann::ordered_json j;
  j["f"] = model.components;
  j["converged"] = model.converged;
  j["iterations"] = model.iterations;
  j["residual"] = model.residual;
  j["relative_residual"] = model.relative_residual;
  j["seed"] = model.seed;
  io::write_file_atomic(dir / (stem + ".json"), j.dump(2) + "\n");
}

}  // namespace specrev::bss
