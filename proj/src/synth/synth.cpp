#include "specrev/synth.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <numbers>

#include "specrev/error.hpp"
#include "specrev/kernels.hpp"
#include "specrev/rng.hpp"

namespace specrev::synth {

double BandModel::evaluate(double wavenumber) const noexcept {
  const double u = (wavenumber - center) / width;
  if (shape == BandShape::gaussian) return amplitude * std::exp(-std::numbers::ln2 * u * u);
  return amplitude / (1.0 + u * u);
}

Spectrum RawMaterialModel::pure_spectrum(const WavenumberAxis& axis) const {
  std::vector<double> y(axis.size(), 0.0);
  const double span = axis.back() - axis.front();
  for (std::size_t i = 0; i < axis.size(); ++i) {
    double v = 0.0;
    for (const auto& band : bands) v += band.evaluate(axis[i]);
    const double t = (axis[i] - axis.front()) / span;
    double p = 0.0;
    for (auto k = baseline.size(); k-- > 0;) p = p * t + baseline[k];
    y[i] = v + p;
  }
  return Spectrum(axis, std::move(y), name);
}

RawMaterialModel generate_material(std::uint64_t seed, const WavenumberAxis& axis, int n_bands,
                                   std::optional<BandShape> shape, std::string name) {
  if (n_bands < 1)
    throw Error(ErrorKind::InvalidArgument, "a material needs at least one band");
  Rng rng(seed);
  const double step = axis.min_step();
  const double w_lo = std::max(2.0 * step, 6.0);
  const double w_hi = std::max(4.0 * step, 16.0);

  RawMaterialModel model;
  model.name = name.empty() ? "material_" + std::to_string(seed) : std::move(name);
  std::vector<double> widths(static_cast<std::size_t>(n_bands));
  for (auto& w : widths) w = rng.uniform(w_lo, w_hi);
  const double spacing = 3.0 * *std::max_element(widths.begin(), widths.end());
  const double margin = spacing;
  const double lo = axis.front() + margin;
  const double hi = axis.back() - margin;
  if (hi <= lo || (hi - lo) < spacing * static_cast<double>(n_bands - 1))
    throw Error(ErrorKind::AxisTooNarrow,
                "axis of " + std::to_string(axis.back() - axis.front()) + " cm^-1 cannot hold " +
                    std::to_string(n_bands) + " bands spaced " + std::to_string(spacing) +
                    " cm^-1 apart");

  std::vector<double> centers;
  constexpr int kMaxAttempts = 20000;
  for (int attempt = 0; attempt < kMaxAttempts && centers.size() < widths.size(); ++attempt) {
    const double c = rng.uniform(lo, hi);
    const bool clear = std::all_of(centers.begin(), centers.end(),
                                   [&](double other) { return std::abs(other - c) >= spacing; });
    if (clear) centers.push_back(c);
  }
  if (centers.size() < widths.size())
    throw Error(ErrorKind::AxisTooNarrow,
                "could not place " + std::to_string(n_bands) + " resolvable bands on the axis");

  double peak = 0.0;
  for (std::size_t b = 0; b < widths.size(); ++b) {
    BandModel band;
    band.center = centers[b];
    band.width = widths[b];
    band.amplitude = rng.uniform(0.15, 1.0);
    const bool lorentz = rng.uniform() < 0.5;
    band.shape = shape.value_or(lorentz ? BandShape::lorentzian : BandShape::gaussian);
    peak = std::max(peak, band.amplitude);
    model.bands.push_back(band);
  }
  for (auto& band : model.bands) band.amplitude /= peak;
  std::sort(model.bands.begin(), model.bands.end(),
            [](const BandModel& a, const BandModel& b) { return a.center < b.center; });
  return model;
}

namespace {

void check_composition(std::span<const double> composition, std::size_t k) {
  if (composition.size() != k)
    throw Error(ErrorKind::CompositionInvalid,
                "composition has " + std::to_string(composition.size()) + " entries for " +
                    std::to_string(k) + " materials");
  double total = 0.0;
  for (const double c : composition) {
    if (!(c >= 0.0) || !std::isfinite(c))
      throw Error(ErrorKind::CompositionInvalid, "composition entries must be >= 0");
    total += c;
  }
  if (total > 1.0 + 1e-9)
    throw Error(ErrorKind::CompositionInvalid,
                "composition sums to " + std::to_string(total) + " (> 1)");
}

}  // namespace

MixtureSample mix(std::span<const Spectrum> pure_spectra, std::span<const double> composition,
                  double noise_sigma, std::uint64_t seed, std::span<const double> baseline) {
  if (pure_spectra.empty()) throw Error(ErrorKind::InvalidArgument, "no materials to mix");
  check_composition(composition, pure_spectra.size());
  if (!(noise_sigma >= 0.0))
    throw Error(ErrorKind::InvalidArgument, "noise sigma must be >= 0");
  const WavenumberAxis& axis = pure_spectra.front().axis();
  std::vector<double> y(axis.size(), 0.0);
  for (std::size_t k = 0; k < pure_spectra.size(); ++k) {
    if (!(pure_spectra[k].axis() == axis))
      throw Error(ErrorKind::AxisMismatch, "pure spectra are on different axes");
    if (composition[k] != 0.0) kernels::axpy(composition[k], pure_spectra[k].intensities(), y);
  }
  if (!baseline.empty()) {
    if (baseline.size() != y.size())
      throw Error(ErrorKind::DimensionMismatch, "baseline length differs from the axis");
    kernels::axpy(1.0, baseline, y);
  }
  if (noise_sigma > 0.0) {
    double peak = 0.0;
    for (const double v : y) peak = std::max(peak, std::abs(v));
    const double sd = noise_sigma * peak;
    Rng rng(seed);
    for (auto& v : y) v += sd * rng.normal();
  }
  MixtureSample sample{std::vector<double>(composition.begin(), composition.end()),
                       Spectrum(axis, std::move(y), "mixture"), noise_sigma, seed};
  return sample;
}

MixtureSample mix(std::span<const RawMaterialModel> materials, const WavenumberAxis& axis,
                  std::span<const double> composition, double noise_sigma, std::uint64_t seed) {
  std::vector<Spectrum> pures;
  pures.reserve(materials.size());
  for (const auto& m : materials) pures.push_back(m.pure_spectrum(axis));
  return mix(pures, composition, noise_sigma, seed);
}

SpectrumMatrix mix_batch(std::span<const Spectrum> pure_spectra, const Matrix& compositions,
                         double noise_sigma, std::uint64_t seed) {
  if (pure_spectra.empty()) throw Error(ErrorKind::InvalidArgument, "no materials to mix");
  const WavenumberAxis& axis = pure_spectra.front().axis();
  Matrix out(compositions.rows(), static_cast<Eigen::Index>(axis.size()));
  std::vector<std::string> labels;
  for (Eigen::Index i = 0; i < compositions.rows(); ++i) {
    const RowVector c = compositions.row(i);
    const auto sample = mix(pure_spectra, std::span<const double>(c.data(), c.size()), noise_sigma,
                            seed + static_cast<std::uint64_t>(i));
    std::copy(sample.spectrum.intensities().begin(), sample.spectrum.intensities().end(),
              out.row(i).data());
    labels.push_back("mix_" + std::to_string(i + 1));
  }
  return SpectrumMatrix(axis, std::move(out), std::move(labels));
}

Matrix random_compositions(std::size_t count, std::size_t k, double total, std::uint64_t seed) {
  Rng rng(seed);
  Matrix out(static_cast<Eigen::Index>(count), static_cast<Eigen::Index>(k));
  for (std::size_t i = 0; i < count; ++i) {
    // Normalized exponentials are uniform on the simplex.
    double s = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      double u = rng.uniform();
      while (u <= 0.0) u = rng.uniform();
      const double e = -std::log(u);
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = e;
      s += e;
    }
    out.row(static_cast<Eigen::Index>(i)) *= total / s;
  }
  return out;
}

Matrix variation_series(std::span<const double> base, std::size_t count, double lo, double hi,
                        std::uint64_t seed) {
  if (!(lo >= 0.0 && hi >= lo))
    throw Error(ErrorKind::InvalidArgument, "variation range needs 0 <= lo <= hi");
  for (double c : base)
    if (!(c >= 0.0)) throw Error(ErrorKind::CompositionInvalid, "composition entries must be >= 0");
  Rng rng(seed);
  const auto k = static_cast<Eigen::Index>(base.size());
  Matrix out(static_cast<Eigen::Index>(count), k);
  for (std::size_t i = 0; i < count; ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    double sum = 0.0;
    for (Eigen::Index j = 0; j < k; ++j) {
      out(r, j) = base[static_cast<std::size_t>(j)] * rng.uniform(lo, hi);
      sum += out(r, j);
    }
    const double dilution = 1.0 / static_cast<double>(1 + i % 3);
    out.row(r) *= dilution * (sum > 1.0 ? 1.0 / sum : 1.0);
  }
  return out;
}

std::string material_json(const RawMaterialModel& model) {
  nlohmann::ordered_json j;
  j["name"] = model.name;
  j["bands"] = nlohmann::ordered_json::array();
  for (const auto& b : model.bands) {
    nlohmann::ordered_json jb;
    jb["center"] = b.center;
    jb["width"] = b.width;
    jb["amplitude"] = b.amplitude;
    jb["shape"] = b.shape == BandShape::gaussian ? "gaussian" : "lorentzian";
    j["bands"].push_back(jb);
  }
  j["baseline"] = model.baseline;
  return j.dump(2) + "\n";
}

RawMaterialModel material_from_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    RawMaterialModel m;
    m.name = j.at("name").get<std::string>();
    for (const auto& jb : j.at("bands")) {
      BandModel b;
      b.center = jb.at("center").get<double>();
      b.width = jb.at("width").get<double>();
      b.amplitude = jb.at("amplitude").get<double>();
      const auto shape = jb.at("shape").get<std::string>();
      if (shape == "gaussian") {
        b.shape = BandShape::gaussian;
      } else if (shape == "lorentzian") {
        b.shape = BandShape::lorentzian;
      } else {
        throw Error(ErrorKind::ParseError, "unknown band shape '" + shape + "'");
      }
      if (!(b.width > 0.0) || !(b.amplitude > 0.0))
        throw Error(ErrorKind::ParseError, "band width and amplitude must be > 0");
      m.bands.push_back(b);
    }
    if (j.contains("baseline")) m.baseline = j.at("baseline").get<std::vector<double>>();
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("material JSON: ") + e.what());
  }
}

}  // namespace specrev::synth
