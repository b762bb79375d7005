#include <algorithm>
#include <cmath>
#include <ostream>
#include <set>
#include <sstream>

#include "commands.hpp"
#include "specrev/design.hpp"
#include "specrev/error.hpp"
#include "specrev/io.hpp"
#include "specrev/pls.hpp"
#include "text_table.hpp"
#include "util.hpp"

namespace specrev::cli {
namespace {

constexpr const char* kMscReferenceFile = "msc_reference.csv";

design::DesignSpec design_spec(const std::string& kind, std::size_t q) {
  design::DesignSpec spec;
  spec.q = q;
  if (kind == "centroid") {
    spec.kind = design::DesignKind::centroid;
  } else if (kind == "centroid_augmented") {
    spec.kind = design::DesignKind::centroid_augmented;
  } else if (kind == "lattice" || kind.rfind("lattice:", 0) == 0) {
    spec.kind = design::DesignKind::lattice;
    if (kind.size() > 8) {
      double m = 0.0;
      if (!io::parse_double(kind.substr(8), m) || m < 1.0 || m != std::floor(m))
        throw Error(ErrorKind::ConfigError, "lattice degree must be a positive integer, got '" + kind.substr(8) + "'");
      spec.degree = static_cast<std::size_t>(m);
    }
  } else {
    throw Error(ErrorKind::ConfigError, "unknown design kind '" + kind + "'");
  }
  return spec;
}

/// SNV / MSC preprocessing. With snv_msc the reference is computed from the
/// rows unless one is supplied (as at prediction time).
Matrix preprocess(const SpectrumMatrix& raw, const std::string& mode, std::optional<Spectrum>& msc_ref) {
  if (mode == "none") return raw.data();
  SpectrumMatrix snv = normalize_rows(raw);
  if (mode == "snv") return snv.data();
  if (!msc_ref) msc_ref = msc_reference(snv);
  Matrix out(snv.data().rows(), snv.data().cols());
  for (std::size_t i = 0; i < snv.rows(); ++i) {
    const Spectrum c = msc_correct(snv.row(i), *msc_ref);
    out.row(static_cast<Eigen::Index>(i)) = Eigen::Map<const RowVector>(c.intensities().data(),
                                                                        static_cast<Eigen::Index>(c.size()));
  }
  return out;
}

Json metrics_json(const pls::MetricsReport& m) {
  Json rows = Json::array();
  for (std::size_t j = 0; j < m.responses.size(); ++j) {
    const auto i = static_cast<Eigen::Index>(j);
    Json r;
    r["response"] = m.responses[j];
    r["rmsec"] = m.rmsec(i);
    r["rmsecv"] = m.rmsecv(i);
    if (m.empty_test_set) r["rmsep"] = nullptr;
    else r["rmsep"] = m.rmsep(i);
    r["r2y"] = m.r2y(i);
    r["q2y"] = m.q2y(i);
    r["q2y_flagged"] = static_cast<bool>(m.q2_flagged[j]);
    rows.push_back(r);
  }
  return rows;
}

std::string metrics_text(const pls::MetricsReport& m) {
  TextTable t({"response", "RMSEC", "RMSECV", "RMSEP", "R2Y", "Q2Y"});
  for (std::size_t j = 0; j < m.responses.size(); ++j) {
    const auto i = static_cast<Eigen::Index>(j);
    t.add({m.responses[j], fixed(m.rmsec(i), 3), fixed(m.rmsecv(i), 3), m.empty_test_set ? "-" : fixed(m.rmsep(i), 3),
           fixed(m.r2y(i), 4), fixed(m.q2y(i), 4)});
  }
  return t.render();
}

Matrix design_responses(const design::MixtureDesign& d) { return d.points * 100.0; }

}  // namespace

int cmd_design(Context& ctx, const DesignArgs& args) {
  const PipelineConfig& cfg = ctx.config;
  const std::size_t q = args.components.size();
  if (q < 2 || q > 5)
    throw Error(ErrorKind::UnsupportedQ, "design needs 2 to 5 components, got " + std::to_string(q));
  std::set<std::string> unique(args.components.begin(), args.components.end());
  if (unique.size() != q) throw Error(ErrorKind::DuplicateName, "component names must be distinct");
  const std::string kind = args.kind.value_or(cfg.design_kind);
  auto bounds_map = args.bounds ? parse_bounds(*args.bounds) : cfg.bounds;

  design::DesignSpec spec = design_spec(kind, q);
  spec.names = args.components;
  if (!bounds_map.empty()) {
    spec.bounds.assign(q, design::Bounds{});
    for (const auto& [name, b] : bounds_map) {
      auto it = std::find(args.components.begin(), args.components.end(), name);
      if (it == args.components.end())
        throw Error(ErrorKind::ConfigError, "bounds given for '" + name + "', which is not a design component");
      spec.bounds[static_cast<std::size_t>(it - args.components.begin())] = b;
    }
  }
  const auto result = design::generate(spec);
  const auto& d = result.design;
  ensure_dir(cfg.output_dir);
  design::write_design_csv(cfg.output_dir / "design.csv", d);

  Json rep = report_header(ctx, "design", cfg.seed);
  rep["components"] = d.components;
  rep["kind"] = kind;
  rep["minimum_runs"] = design::minimum_runs(q);
  rep["runs"] = d.runs();
  Json b = Json::array();
  for (std::size_t j = 0; j < q; ++j)
    b.push_back({{"component", d.components[j]}, {"lower", d.bounds[j].lower}, {"upper", d.bounds[j].upper}});
  rep["bounds"] = b;
  rep["rejected"] = result.rejected;
  rep["file"] = "design.csv";

  std::string text = "mixture design  config " + config_hash(cfg) + "  seed " + std::to_string(cfg.seed) + "\n";
  text += std::to_string(q) + " components, kind " + kind + ", " + std::to_string(d.runs()) + " runs (minimum " +
          std::to_string(design::minimum_runs(q)) + ")\n";
  if (!result.rejected.empty())
    text += std::to_string(result.rejected.size()) + " points rejected for exceeding an upper bound\n";
  if (d.runs() < design::minimum_runs(q))
    text += "warning: bounds left fewer runs than the minimum for " + std::to_string(q) + " components\n";
  std::vector<std::string> header{"run"};
  header.insert(header.end(), d.components.begin(), d.components.end());
  TextTable t(header);
  for (Eigen::Index i = 0; i < d.points.rows(); ++i) {
    std::vector<std::string> row{std::to_string(i + 1)};
    for (Eigen::Index j = 0; j < d.points.cols(); ++j) row.push_back(fixed(100.0 * d.points(i, j), 2));
    t.add(row);
  }
  text += "\n" + t.render();
  write_report(cfg.output_dir, "design", rep, text);
  ctx.out << text;
  return 0;
}

int cmd_calibrate(Context& ctx, const CalibrateArgs& args) {
  const PipelineConfig& cfg = ctx.config;
  const auto d = design::read_design_csv(args.design);
  std::optional<WavenumberAxis> target;
  if (cfg.axis) target = cfg.axis->build();
  const SpectrumMatrix raw = stack_inputs(args.spectra, target);
  if (raw.rows() != d.runs())
    throw Error(ErrorKind::DimensionMismatch, "design has " + std::to_string(d.runs()) + " runs but " +
                                                  std::to_string(raw.rows()) + " spectra were given");
  std::optional<Spectrum> msc_ref;
  const Matrix X = preprocess(raw, cfg.preprocess, msc_ref);
  const Matrix Y = design_responses(d);

  const pls::CvScheme scheme = cfg.cv == "auto" ? pls::CvScheme::default_for(raw.rows()) : pls::parse_cv_scheme(cfg.cv);
  std::size_t lv_max = cfg.lv_max;
  if (raw.rows() >= 2) lv_max = std::min(lv_max, pls::max_lv_for(scheme, raw.rows(), raw.cols()));
  const auto cv = pls::cross_validate(X, Y, scheme, lv_max);
  pls::PlsModel model = pls::fit_nipals(X, Y, cv.selected_lv);
  model.responses = d.components;

  Matrix X_test(0, X.cols()), Y_test(0, Y.cols());
  Json test_inputs = Json::array();
  if (args.test_design) {
    const auto td = design::read_design_csv(*args.test_design);
    if (td.components != d.components)
      throw Error(ErrorKind::DimensionMismatch, "test design components differ from the calibration design");
    const SpectrumMatrix traw = stack_inputs(args.test_spectra, raw.axis());
    if (traw.rows() != td.runs())
      throw Error(ErrorKind::DimensionMismatch, "test design has " + std::to_string(td.runs()) + " runs but " +
                                                    std::to_string(traw.rows()) + " test spectra were given");
    std::optional<Spectrum> ref = msc_ref;
    X_test = preprocess(traw, cfg.preprocess, ref);
    Y_test = design_responses(td);
    test_inputs.push_back(input_record(*args.test_design));
    for (const auto& f : args.test_spectra) test_inputs.push_back(input_record(f));
  }
  const auto metrics = pls::metrics(model, X, Y, X_test, Y_test, scheme);

  const auto model_dir = cfg.output_dir / "model";
  pls::save_model(model, raw.axis(), model_dir, cfg.preprocess);
  if (msc_ref) write_spectrum_csv(model_dir / kMscReferenceFile, *msc_ref);
  const std::string mcsv = pls::metrics_csv(metrics);
  io::write_file_atomic(model_dir / "metrics.csv", mcsv);
  io::write_file_atomic(cfg.output_dir / "metrics.csv", mcsv);

  Json rep = report_header(ctx, "calibrate", cfg.seed);
  Json inputs = Json::array();
  inputs.push_back(input_record(args.design));
  for (const auto& f : args.spectra) inputs.push_back(input_record(f));
  rep["inputs"] = inputs;
  rep["test_inputs"] = test_inputs;
  rep["samples"] = raw.rows();
  rep["features"] = raw.cols();
  rep["responses"] = d.components;
  rep["preprocess"] = cfg.preprocess;
  rep["cv"] = pls::to_string(scheme);
  rep["lv_max"] = lv_max;
  rep["rmsecv_by_lv"] = std::vector<double>(cv.rmsecv_total.data(), cv.rmsecv_total.data() + cv.rmsecv_total.size());
  rep["selected_lv"] = cv.selected_lv;
  rep["n_lv"] = model.n_lv;
  rep["all_lv_converged"] = model.all_converged();
  rep["empty_test_set"] = metrics.empty_test_set;
  rep["metrics"] = metrics_json(metrics);
  rep["model_dir"] = "model";

  std::string text = "calibration  config " + config_hash(cfg) + "  seed " + std::to_string(cfg.seed) + "\n";
  text += std::to_string(raw.rows()) + " samples, " + std::to_string(raw.cols()) + " points, preprocess " +
          cfg.preprocess + ", cv " + pls::to_string(scheme) + ", " + std::to_string(model.n_lv) + " latent variables\n";
  if (metrics.empty_test_set) text += "no test set: RMSEP omitted\n";
  if (!model.all_converged()) text += "warning: NIPALS did not converge for every latent variable\n";
  text += "\n" + metrics_text(metrics);
  write_report(cfg.output_dir, "calibration", rep, text);
  ctx.out << text;
  return 0;
}

int cmd_quantify(Context& ctx, const QuantifyArgs& args) {
  const PipelineConfig& cfg = ctx.config;
  const auto loaded = pls::load_model(args.model);
  const SpectrumMatrix raw = stack_inputs(args.spectra);
  if (!(raw.axis() == loaded.axis))
    throw Error(ErrorKind::AxisMismatch, "spectra axis (" + std::to_string(raw.cols()) + " points, " +
                                             io::format_double(raw.axis().front()) + "-" + io::format_double(raw.axis().back()) +
                                             ") differs from the model axis (" + std::to_string(loaded.axis.size()) + " points)");
  std::optional<Spectrum> msc_ref;
  if (loaded.preprocess == "snv_msc") msc_ref = read_spectrum_csv(args.model / kMscReferenceFile);
  const Matrix X = preprocess(raw, loaded.preprocess, msc_ref);
  const bool clip = args.clip || cfg.clip;
  const auto pred = pls::predict_clipped(loaded.model, X, clip);
  const auto& names = loaded.model.responses;

  std::optional<Matrix> reference;
  if (args.reference) {
    const std::string text = io::read_file(*args.reference);
    std::istringstream is(text);
    std::string line;
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
      ++lineno;
      if (io::trim(line).empty() || io::trim(line)[0] == '#') continue;
      auto f = io::split_csv_line(line);
      if (header.empty()) {
        header = f;
        continue;
      }
      const std::size_t skip = header.front() == "sample" ? 1 : 0;
      if (f.size() != header.size())
        throw Error(ErrorKind::ParseError, args.reference->string() + ":" + std::to_string(lineno) + ": wrong field count");
      std::vector<double> row;
      for (std::size_t j = skip; j < f.size(); ++j) {
        double v = 0.0;
        if (!io::parse_double(f[j], v))
          throw Error(ErrorKind::ParseError, args.reference->string() + ":" + std::to_string(lineno) + ": bad number '" + f[j] + "'");
        row.push_back(v);
      }
      rows.push_back(row);
    }
    if (!header.empty() && header.front() == "sample") header.erase(header.begin());
    if (rows.size() != raw.rows())
      throw Error(ErrorKind::DimensionMismatch, "reference has " + std::to_string(rows.size()) + " rows for " +
                                                    std::to_string(raw.rows()) + " spectra");
    Matrix ref = Matrix::Zero(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(names.size()));
    for (std::size_t c = 0; c < names.size(); ++c) {
      auto it = std::find(header.begin(), header.end(), names[c]);
      if (it == header.end())
        throw Error(ErrorKind::InvalidArgument, "reference has no column for component '" + names[c] + "'");
      const auto col = static_cast<std::size_t>(it - header.begin());
      for (std::size_t i = 0; i < rows.size(); ++i)
        ref(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = rows[i][col];
    }
    reference = ref;
  }

  Json rep = report_header(ctx, "quantify", cfg.seed);
  Json inputs = Json::array();
  for (const auto& f : args.spectra) inputs.push_back(input_record(f));
  if (args.reference) inputs.push_back(input_record(*args.reference));
  rep["inputs"] = inputs;
  rep["model"] = {{"n_lv", loaded.model.n_lv}, {"preprocess", loaded.preprocess},
                  {"coefficients_fnv1a64", io::hex64(io::fnv1a64(io::read_file(args.model / "coefficients.csv")))}};
  rep["components"] = names;
  rep["clipped"] = clip;
  rep["clipped_entries"] = pred.clipped;

  std::string text = "quantification  config " + config_hash(cfg) + "  seed " + std::to_string(cfg.seed) + "\n";
  text += std::to_string(raw.rows()) + " spectra, model with " + std::to_string(loaded.model.n_lv) +
          " latent variables" + (clip ? ", predictions clipped to [0, 100]" : "") + "\n";
  Json samples = Json::array();
  double max_err = 0.0;
  for (std::size_t i = 0; i < raw.rows(); ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    Json sj;
    sj["sample"] = raw.labels()[i];
    Json comp = Json::array();
    TextTable t(reference ? std::vector<std::string>{"component", "experimental", "calculated", "abs error"}
                          : std::vector<std::string>{"component", "calculated"});
    for (std::size_t c = 0; c < names.size(); ++c) {
      const auto cc = static_cast<Eigen::Index>(c);
      const double v = pred.values(ii, cc);
      Json cj;
      cj["component"] = names[c];
      cj["predicted_pct"] = v;
      if (reference) {
        const double r = (*reference)(ii, cc);
        cj["reference_pct"] = r;
        cj["abs_error"] = std::abs(v - r);
        max_err = std::max(max_err, std::abs(v - r));
        t.add({names[c], fixed(r, 2), fixed(v, 2), fixed(std::abs(v - r), 2)});
      } else {
        t.add({names[c], fixed(v, 2)});
      }
      comp.push_back(cj);
    }
    sj["composition"] = comp;
    samples.push_back(sj);
    text += "\nsample " + raw.labels()[i] + "\n" + t.render();
  }
  rep["samples"] = samples;
  if (reference) {
    rep["max_abs_error"] = max_err;
    text += "\nmax abs error: " + fixed(max_err, 3) + " points\n";
  }

  const auto metrics_path = args.model / "metrics.csv";
  if (std::filesystem::exists(metrics_path)) {
    std::istringstream is(io::read_file(metrics_path));
    std::string line;
    std::vector<std::string> header;
    Json rows = Json::array();
    TextTable t({"response", "RMSEC", "RMSECV", "RMSEP", "R2Y", "Q2Y"});
    while (std::getline(is, line)) {
      if (io::trim(line).empty()) continue;
      auto f = io::split_csv_line(line);
      if (header.empty()) {
        header = f;
        continue;
      }
      Json r;
      std::vector<std::string> cells{f[0]};
      r[header[0]] = f[0];
      for (std::size_t j = 1; j < f.size() && j < header.size(); ++j) {
        double v = 0.0;
        if (f[j].empty() || !io::parse_double(f[j], v)) {
          r[header[j]] = nullptr;
          cells.push_back("-");
        } else {
          r[header[j]] = v;
          cells.push_back(fixed(v, j >= 4 ? 4 : 3));
        }
      }
      rows.push_back(r);
      t.add(cells);
    }
    rep["model_metrics"] = rows;
    text += "\nmodel metrics\n" + t.render();
  }

  write_report(cfg.output_dir, "quantification", rep, text);
  ctx.out << text;
  return 0;
}

}  // namespace specrev::cli
