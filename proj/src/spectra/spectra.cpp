#include "specrev/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "specrev/error.hpp"
#include "specrev/kernels.hpp"

namespace specrev {

namespace {

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (const double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

WavenumberAxis::WavenumberAxis(std::vector<double> values) : values_(std::move(values)) {
  if (values_.size() < 2)
    throw Error(ErrorKind::InvalidAxis, "axis needs at least 2 points, got " +
                                            std::to_string(values_.size()));
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i]))
      throw Error(ErrorKind::InvalidAxis, "non-finite wavenumber at index " + std::to_string(i));
    if (i > 0 && !(values_[i] > values_[i - 1]))
      throw Error(ErrorKind::InvalidAxis,
                  "axis not strictly increasing at index " + std::to_string(i));
  }
}

WavenumberAxis WavenumberAxis::uniform(double min, double max, double step) {
  if (!(step > 0.0) || !(max > min) || !std::isfinite(min) || !std::isfinite(max))
    throw Error(ErrorKind::InvalidAxis, "uniform axis needs min < max and step > 0");
  const auto count = static_cast<std::size_t>(std::floor((max - min) / step + 1e-9)) + 1;
  std::vector<double> v(count);
  for (std::size_t i = 0; i < count; ++i) v[i] = min + step * static_cast<double>(i);
  return WavenumberAxis(std::move(v));
}

WavenumberAxis WavenumberAxis::instrument_default() { return uniform(150.0, 3480.0, 4.0); }

double WavenumberAxis::min_step() const noexcept {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < values_.size(); ++i) m = std::min(m, values_[i] - values_[i - 1]);
  return m;
}

bool WavenumberAxis::contains(double wavenumber) const noexcept {
  return wavenumber >= front() && wavenumber <= back();
}

Spectrum::Spectrum(WavenumberAxis axis, std::vector<double> intensities, std::string label)
    : axis_(std::move(axis)), intensities_(std::move(intensities)), label_(std::move(label)) {
  if (intensities_.size() != axis_.size())
    throw Error(ErrorKind::InvalidSpectrum,
                "spectrum '" + label_ + "' has " + std::to_string(intensities_.size()) +
                    " intensities for an axis of " + std::to_string(axis_.size()));
  for (std::size_t i = 0; i < intensities_.size(); ++i)
    if (!std::isfinite(intensities_[i]))
      throw Error(ErrorKind::InvalidSpectrum, "spectrum '" + label_ +
                                                  "' has a non-finite intensity at index " +
                                                  std::to_string(i));
}

SpectrumMatrix::SpectrumMatrix(WavenumberAxis axis, Matrix rows, std::vector<std::string> labels)
    : axis_(std::move(axis)), rows_(std::move(rows)), labels_(std::move(labels)) {
  if (rows_.rows() < 1)
    throw Error(ErrorKind::InvalidSpectrum, "spectrum matrix needs at least one row");
  if (static_cast<std::size_t>(rows_.cols()) != axis_.size())
    throw Error(ErrorKind::InvalidSpectrum,
                "matrix has " + std::to_string(rows_.cols()) + " columns for an axis of " +
                    std::to_string(axis_.size()));
  if (!rows_.allFinite())
    throw Error(ErrorKind::InvalidSpectrum, "spectrum matrix has non-finite entries");
  if (labels_.empty()) {
    for (Eigen::Index i = 0; i < rows_.rows(); ++i)
      labels_.push_back("sample_" + std::to_string(i + 1));
  } else if (labels_.size() != this->rows()) {
    throw Error(ErrorKind::InvalidSpectrum, "label count does not match row count");
  }
}

SpectrumMatrix SpectrumMatrix::from_spectra(std::span<const Spectrum> spectra) {
  if (spectra.empty()) throw Error(ErrorKind::InvalidSpectrum, "no spectra given");
  const WavenumberAxis& axis = spectra.front().axis();
  Matrix m(static_cast<Eigen::Index>(spectra.size()), static_cast<Eigen::Index>(axis.size()));
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < spectra.size(); ++i) {
    if (!(spectra[i].axis() == axis))
      throw Error(ErrorKind::AxisMismatch,
                  "spectrum '" + spectra[i].label() + "' is on a different axis");
    std::copy(spectra[i].intensities().begin(), spectra[i].intensities().end(),
              m.row(static_cast<Eigen::Index>(i)).data());
    labels.push_back(spectra[i].label().empty() ? "sample_" + std::to_string(i + 1)
                                                : spectra[i].label());
  }
  return SpectrumMatrix(axis, std::move(m), std::move(labels));
}

Spectrum SpectrumMatrix::row(std::size_t i) const {
  const auto r = row_span(i);
  return Spectrum(axis_, std::vector<double>(r.begin(), r.end()), labels_[i]);
}

SpectrumMatrix SpectrumMatrix::slice(std::size_t first, std::size_t count) const {
  if (first + count > rows() || count == 0)
    throw Error(ErrorKind::InvalidArgument, "row slice out of range");
  Matrix m = rows_.middleRows(static_cast<Eigen::Index>(first), static_cast<Eigen::Index>(count));
  std::vector<std::string> labels(labels_.begin() + static_cast<std::ptrdiff_t>(first),
                                  labels_.begin() + static_cast<std::ptrdiff_t>(first + count));
  return SpectrumMatrix(axis_, std::move(m), std::move(labels));
}

Spectrum resample(const Spectrum& spec, const WavenumberAxis& target) {
  const auto src = spec.axis().values();
  const auto y = spec.intensities();
  if (spec.axis() == target) return spec;
  const double slack = 1e-9 * (src.back() - src.front());
  if (target.front() < src.front() - slack || target.back() > src.back() + slack)
    throw Error(ErrorKind::AxisOutOfRange,
                "target axis [" + std::to_string(target.front()) + ", " +
                    std::to_string(target.back()) + "] exceeds source axis [" +
                    std::to_string(src.front()) + ", " + std::to_string(src.back()) + "]");
  std::vector<double> out(target.size());
  for (std::size_t k = 0; k < target.size(); ++k) {
    const double w = std::clamp(target[k], src.front(), src.back());
    auto it = std::upper_bound(src.begin(), src.end(), w);
    std::size_t i = static_cast<std::size_t>(it - src.begin());
    i = i == 0 ? 0 : i - 1;
    if (src[i] == w || i + 1 >= src.size()) {
      out[k] = y[i];
      continue;
    }
    const double t = (w - src[i]) / (src[i + 1] - src[i]);
    out[k] = y[i] + (y[i + 1] - y[i]) * t;
  }
  return Spectrum(target, std::move(out), spec.label());
}

void normalize_in_place(std::span<double> values, const std::string& label) {
  const double n = static_cast<double>(values.size());
  const double mean = kernels::sum(values) / n;
  const double ss = kernels::centered_dot(values, values, mean, mean);
  const double norm = std::sqrt(ss);
  const double scale = std::max(max_abs(values), std::numeric_limits<double>::min());
  if (!(norm > 1e-12 * scale * std::sqrt(n)))
    throw Error(ErrorKind::DegenerateSpectrum,
                "spectrum '" + label + "' is constant and cannot be normalized");
  kernels::shift_scale(values, mean, 1.0 / norm);
}

Spectrum normalize(const Spectrum& spec) {
  std::vector<double> v(spec.intensities().begin(), spec.intensities().end());
  normalize_in_place(v, spec.label());
  return Spectrum(spec.axis(), std::move(v), spec.label());
}

Spectrum msc_reference(const SpectrumMatrix& mat) {
  if (mat.rows() < 2)
    throw Error(ErrorKind::InvalidArgument, "MSC reference needs at least 2 spectra");
  const RowVector mean = mat.data().colwise().mean();
  return Spectrum(mat.axis(), std::vector<double>(mean.data(), mean.data() + mean.size()),
                  "msc_reference");
}

MscFit msc_fit(std::span<const double> spec, std::span<const double> ref) {
  if (spec.size() != ref.size())
    throw Error(ErrorKind::AxisMismatch, "spectrum and reference differ in length");
  const double n = static_cast<double>(ref.size());
  const double ref_mean = kernels::sum(ref) / n;
  const double spec_mean = kernels::sum(spec) / n;
  const double sxx = kernels::centered_dot(ref, ref, ref_mean, ref_mean);
  const double scale = std::max(max_abs(ref), std::numeric_limits<double>::min());
  if (!(std::sqrt(sxx) > 1e-12 * scale * std::sqrt(n)))
    throw Error(ErrorKind::DegenerateReference, "MSC reference spectrum is constant");
  const double sxy = kernels::centered_dot(ref, spec, ref_mean, spec_mean);
  MscFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = spec_mean - fit.slope * ref_mean;
  return fit;
}

Spectrum msc_correct(const Spectrum& spec, const Spectrum& ref) {
  if (!(spec.axis() == ref.axis()))
    throw Error(ErrorKind::AxisMismatch, "spectrum and MSC reference are on different axes");
  const MscFit fit = msc_fit(spec.intensities(), ref.intensities());
  if (std::abs(fit.slope) < 1e-10)
    throw Error(ErrorKind::NearZeroSlope, "spectrum '" + spec.label() +
                                              "' is unrelated to the MSC reference (slope " +
                                              std::to_string(fit.slope) + ")");
  std::vector<double> v(spec.intensities().begin(), spec.intensities().end());
  kernels::shift_scale(v, fit.intercept, 1.0 / fit.slope);
  return Spectrum(spec.axis(), std::move(v), spec.label());
}

SpectrumMatrix normalize_rows(const SpectrumMatrix& mat) {
  Matrix m = mat.data();
  const auto n = static_cast<std::size_t>(m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    normalize_in_place({m.row(i).data(), n}, mat.labels()[static_cast<std::size_t>(i)]);
  return SpectrumMatrix(mat.axis(), std::move(m), mat.labels());
}

SpectrumMatrix preprocess_snv_msc(const SpectrumMatrix& mat) {
  SpectrumMatrix snv = normalize_rows(mat);
  if (snv.rows() < 2) return snv;
  const Spectrum ref = msc_reference(snv);
  Matrix m = snv.data();
  const auto n = static_cast<std::size_t>(m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    std::span<double> row{m.row(i).data(), n};
    const MscFit fit = msc_fit(row, ref.intensities());
    if (std::abs(fit.slope) < 1e-10)
      throw Error(ErrorKind::NearZeroSlope,
                  "spectrum '" + mat.labels()[static_cast<std::size_t>(i)] +
                      "' is unrelated to the MSC reference");
    kernels::shift_scale(row, fit.intercept, 1.0 / fit.slope);
  }
  return SpectrumMatrix(mat.axis(), std::move(m), mat.labels());
}

double pearson(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.empty())
    throw Error(ErrorKind::DimensionMismatch, "correlation operands differ in length");
  const double n = static_cast<double>(a.size());
  const double ma = kernels::sum(a) / n;
  const double mb = kernels::sum(b) / n;
  const double saa = kernels::centered_dot(a, a, ma, ma);
  const double sbb = kernels::centered_dot(b, b, mb, mb);
  if (!(saa > 0.0) || !(sbb > 0.0)) return 0.0;
  const double r = kernels::centered_dot(a, b, ma, mb) / std::sqrt(saa * sbb);
  return std::clamp(r, -1.0, 1.0);
}

}  // namespace specrev
