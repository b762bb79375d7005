#pragma once

// Spectrum representation on a wavenumber axis, plus the preprocessing used
// ahead of separation and matching: linear resampling, SNV normalization and
// multiplicative signal correction (MSC).

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "specrev/types.hpp"

namespace specrev {

/// Strictly increasing wavenumbers in cm⁻¹, at least two points.
class WavenumberAxis {
 public:
  explicit WavenumberAxis(std::vector<double> values);

  /// min, min+step, ... up to max (inclusive when max lands on the grid).
  static WavenumberAxis uniform(double min, double max, double step);

  /// 150 to 3480 cm⁻¹ at 4 cm⁻¹ (833 points).
  static WavenumberAxis instrument_default();

  std::size_t size() const noexcept { return values_.size(); }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t i) const noexcept { return values_[i]; }
  double front() const noexcept { return values_.front(); }
  double back() const noexcept { return values_.back(); }
  /// Smallest spacing between neighbours.
  double min_step() const noexcept;
  bool contains(double wavenumber) const noexcept;

  friend bool operator==(const WavenumberAxis&, const WavenumberAxis&) = default;

 private:
  std::vector<double> values_;
};

class Spectrum {
 public:
  /// Throws InvalidSpectrum on length mismatch or non-finite intensities.
  Spectrum(WavenumberAxis axis, std::vector<double> intensities, std::string label = {});

  const WavenumberAxis& axis() const noexcept { return axis_; }
  std::span<const double> intensities() const noexcept { return intensities_; }
  const std::string& label() const noexcept { return label_; }
  std::size_t size() const noexcept { return intensities_.size(); }
  double operator[](std::size_t i) const noexcept { return intensities_[i]; }

  void set_label(std::string label) { label_ = std::move(label); }

  friend bool operator==(const Spectrum&, const Spectrum&) = default;

 private:
  WavenumberAxis axis_;
  std::vector<double> intensities_;
  std::string label_;
};

/// s spectra sharing one axis, stored as an s × n row-major matrix.
class SpectrumMatrix {
 public:
  SpectrumMatrix(WavenumberAxis axis, Matrix rows, std::vector<std::string> labels = {});

  static SpectrumMatrix from_spectra(std::span<const Spectrum> spectra);

  const WavenumberAxis& axis() const noexcept { return axis_; }
  const Matrix& data() const noexcept { return rows_; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  std::size_t rows() const noexcept { return static_cast<std::size_t>(rows_.rows()); }
  std::size_t cols() const noexcept { return static_cast<std::size_t>(rows_.cols()); }

  std::span<const double> row_span(std::size_t i) const noexcept {
    return {rows_.data() + i * cols(), cols()};
  }
  Spectrum row(std::size_t i) const;

  /// Rows [first, first + count) as a new matrix.
  SpectrumMatrix slice(std::size_t first, std::size_t count) const;

 private:
  WavenumberAxis axis_;
  Matrix rows_;
  std::vector<std::string> labels_;
};

/// Linear interpolation onto `target`; exact on shared grid points.
/// Throws AxisOutOfRange when `target` extends beyond the source axis.
Spectrum resample(const Spectrum& spec, const WavenumberAxis& target);

/// SNV: subtract the mean, scale to unit Euclidean norm.
/// Throws DegenerateSpectrum on constant input.
Spectrum normalize(const Spectrum& spec);

/// In-place SNV on a raw intensity buffer.
void normalize_in_place(std::span<double> values, const std::string& label = {});

/// Column-wise mean spectrum, used as the MSC reference. Needs s ≥ 2.
Spectrum msc_reference(const SpectrumMatrix& mat);

struct MscFit {
  double slope = 0.0;
  double intercept = 0.0;
};

/// OLS fit of spec ≈ slope·ref + intercept.
/// Throws DegenerateReference when ref is constant.
MscFit msc_fit(std::span<const double> spec, std::span<const double> ref);

/// (spec − intercept) / slope for the OLS fit against ref.
/// Throws NearZeroSlope when |slope| < 1e-10.
Spectrum msc_correct(const Spectrum& spec, const Spectrum& ref);

/// SNV on every row, then MSC against the mean of the normalized rows.
SpectrumMatrix preprocess_snv_msc(const SpectrumMatrix& mat);

SpectrumMatrix normalize_rows(const SpectrumMatrix& mat);

/// Pearson correlation; 0 when either input is constant.
double pearson(std::span<const double> a, std::span<const double> b);

// CSV files: `wavenumber_cm1,intensity` for one spectrum; `wavenumber_cm1`
// followed by one column per sample for a matrix.
Spectrum read_spectrum_csv(const std::filesystem::path& path);
void write_spectrum_csv(const std::filesystem::path& path, const Spectrum& spec);
std::string spectrum_csv(const Spectrum& spec);

SpectrumMatrix read_matrix_csv(const std::filesystem::path& path);
void write_matrix_csv(const std::filesystem::path& path, const SpectrumMatrix& mat);
std::string matrix_csv(const SpectrumMatrix& mat);

/// Accepts either layout; a single-spectrum file becomes a one-row matrix.
SpectrumMatrix read_any_csv(const std::filesystem::path& path);

}  // namespace specrev
