#include <json.hpp>
#include <sstream>

#include "specrev/error.hpp"
#include "specrev/io.hpp"
#include "specrev/pls.hpp"

namespace specrev::pls {
namespace {

constexpr const char* kFormat = "specrev-pls-model";
constexpr int kVersion = 1;

struct Table {
  std::vector<std::string> header;
  std::vector<std::string> keys;
  Matrix values;
};

std::string table_csv(const std::vector<std::string>& header, const std::vector<std::string>& keys,
                      const Matrix& values) {
  std::string out;
  for (std::size_t j = 0; j < header.size(); ++j) out += (j ? "," : "") + io::csv_field(header[j]);
  out += '\n';
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    out += io::csv_field(keys[static_cast<std::size_t>(i)]);
    for (Eigen::Index j = 0; j < values.cols(); ++j) out += "," + io::format_double(values(i, j));
    out += '\n';
  }
  return out;
}

Table read_table(const std::filesystem::path& path, std::size_t expect_cols) {
  const std::string text = io::read_file(path);
  std::istringstream is(text);
  std::string line;
  Table t;
  std::vector<std::vector<double>> rows;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (io::trim(line).empty()) continue;
    auto f = io::split_csv_line(line);
    if (t.header.empty()) {
      t.header = std::move(f);
      if (t.header.size() != expect_cols + 1)
        throw Error(ErrorKind::ParseError, path.string() + ":" + std::to_string(lineno) + ": expected " +
                                               std::to_string(expect_cols + 1) + " columns");
      continue;
    }
    if (f.size() != t.header.size())
      throw Error(ErrorKind::ParseError, path.string() + ":" + std::to_string(lineno) + ": expected " +
                                             std::to_string(t.header.size()) + " fields, got " + std::to_string(f.size()));
    t.keys.push_back(f[0]);
    std::vector<double> row(f.size() - 1);
    for (std::size_t j = 1; j < f.size(); ++j)
      if (!io::parse_double(f[j], row[j - 1]))
        throw Error(ErrorKind::ParseError, path.string() + ":" + std::to_string(lineno) + ": bad number '" + f[j] + "'");
    rows.push_back(std::move(row));
  }
  if (t.header.empty()) throw Error(ErrorKind::ParseError, path.string() + ": empty file");
  t.values.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(expect_cols));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < expect_cols; ++j)
      t.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  return t;
}

std::vector<std::string> lv_header(const std::string& first, std::size_t k) {
  std::vector<std::string> h{first};
  for (std::size_t a = 0; a < k; ++a) h.push_back("lv_" + std::to_string(a + 1));
  return h;
}

std::vector<std::string> with_first(const std::string& first, const std::vector<std::string>& rest) {
  std::vector<std::string> h{first};
  h.insert(h.end(), rest.begin(), rest.end());
  return h;
}

std::vector<std::string> sample_keys(Eigen::Index s) {
  std::vector<std::string> k;
  for (Eigen::Index i = 0; i < s; ++i) k.push_back("sample_" + std::to_string(i + 1));
  return k;
}

RowVector to_row(const nlohmann::json& arr, const char* field, std::size_t expect) {
  if (!arr.is_array() || arr.size() != expect)
    throw Error(ErrorKind::ParseError, std::string("model.json: field '") + field + "' must be an array of " +
                                           std::to_string(expect) + " numbers");
  RowVector v(static_cast<Eigen::Index>(expect));
  for (std::size_t i = 0; i < expect; ++i) v(static_cast<Eigen::Index>(i)) = arr[i].get<double>();
  return v;
}

}  // namespace

void save_model(const PlsModel& model, const WavenumberAxis& axis, const std::filesystem::path& dir,
                const std::string& preprocess) {
  const std::size_t n = model.features();
  if (axis.size() != n)
    throw Error(ErrorKind::AxisMismatch,
                "axis has " + std::to_string(axis.size()) + " points, model has " + std::to_string(n));
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::IoError, "cannot create " + dir.string() + ": " + ec.message());

  std::vector<std::string> wn;
  for (std::size_t i = 0; i < n; ++i) wn.push_back(io::format_double(axis[i]));
  const std::size_t k = model.n_lv;

  Matrix stats(static_cast<Eigen::Index>(n), 2);
  stats.col(0) = model.x_mean.transpose();
  stats.col(1) = model.x_scale.transpose();
  io::write_file_atomic(dir / "x_stats.csv", table_csv({"wavenumber_cm1", "x_mean", "x_scale"}, wn, stats));
  io::write_file_atomic(dir / "coefficients.csv",
                        table_csv(with_first("wavenumber_cm1", model.responses), wn, model.coefficients));
  io::write_file_atomic(dir / "x_weights.csv", table_csv(lv_header("wavenumber_cm1", k), wn, model.x_weights));
  io::write_file_atomic(dir / "x_loadings.csv", table_csv(lv_header("wavenumber_cm1", k), wn, model.x_loadings));
  io::write_file_atomic(dir / "y_loadings.csv", table_csv(lv_header("response", k), model.responses, model.y_loadings));
  io::write_file_atomic(dir / "x_scores.csv",
                        table_csv(lv_header("sample", k), sample_keys(model.x_scores.rows()), model.x_scores));
  io::write_file_atomic(dir / "fitted.csv", table_csv(with_first("sample", model.responses),
                                                      sample_keys(model.fitted.rows()), model.fitted));

  nlohmann::ordered_json j;
  j["format"] = kFormat;
  j["version"] = kVersion;
  j["n_lv"] = model.n_lv;
  j["requested_lv"] = model.requested_lv;
  j["features"] = n;
  j["samples"] = model.fitted.rows();
  j["preprocess"] = preprocess;
  j["responses"] = model.responses;
  j["y_mean"] = std::vector<double>(model.y_mean.data(), model.y_mean.data() + model.y_mean.size());
  j["y_scale"] = std::vector<double>(model.y_scale.data(), model.y_scale.data() + model.y_scale.size());
  j["lv_converged"] = model.lv_converged;
  j["lv_iterations"] = model.lv_iterations;
  // Written last so a complete model.json implies complete matrices.
  io::write_file_atomic(dir / "model.json", j.dump(2) + "\n");
}

LoadedModel load_model(const std::filesystem::path& dir) {
  const auto json_path = dir / "model.json";
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(io::read_file(json_path));
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::ParseError, json_path.string() + ": " + e.what());
  }
  try {
    if (j.value("format", std::string{}) != kFormat)
      throw Error(ErrorKind::ParseError, json_path.string() + ": not a PLS model file");
    PlsModel m;
    m.n_lv = j.at("n_lv").get<std::size_t>();
    m.requested_lv = j.at("requested_lv").get<std::size_t>();
    const auto n = j.at("features").get<std::size_t>();
    const auto s = j.at("samples").get<std::size_t>();
    m.responses = j.at("responses").get<std::vector<std::string>>();
    const std::size_t r = m.responses.size();
    m.y_mean = to_row(j.at("y_mean"), "y_mean", r);
    m.y_scale = to_row(j.at("y_scale"), "y_scale", r);
    m.lv_converged = j.at("lv_converged").get<std::vector<bool>>();
    m.lv_iterations = j.at("lv_iterations").get<std::vector<std::size_t>>();
    const std::string preprocess = j.value("preprocess", std::string("none"));

    auto load = [&](const char* file, std::size_t cols, std::size_t rows) {
      Table t = read_table(dir / file, cols);
      if (static_cast<std::size_t>(t.values.rows()) != rows)
        throw Error(ErrorKind::ParseError, (dir / file).string() + ": expected " + std::to_string(rows) + " rows");
      return t;
    };
    Table stats = load("x_stats.csv", 2, n);
    std::vector<double> wn(n);
    for (std::size_t i = 0; i < n; ++i)
      if (!io::parse_double(stats.keys[i], wn[i]))
        throw Error(ErrorKind::ParseError, (dir / "x_stats.csv").string() + ": bad wavenumber '" + stats.keys[i] + "'");
    WavenumberAxis axis(std::move(wn));
    m.x_mean = stats.values.col(0).transpose();
    m.x_scale = stats.values.col(1).transpose();
    m.coefficients = load("coefficients.csv", r, n).values;
    m.x_weights = load("x_weights.csv", m.n_lv, n).values;
    m.x_loadings = load("x_loadings.csv", m.n_lv, n).values;
    m.y_loadings = load("y_loadings.csv", m.n_lv, r).values;
    m.x_scores = load("x_scores.csv", m.n_lv, s).values;
    m.fitted = load("fitted.csv", r, s).values;
    return {std::move(m), std::move(axis), preprocess};
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, json_path.string() + ": " + e.what());
  }
}

}  // namespace specrev::pls
