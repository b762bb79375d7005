#pragma once

// Synthetic Raman-like spectra: raw materials as sums of Gaussian/Lorentzian
// bands, and mixtures as exact linear combinations plus seeded noise.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "specrev/spectra.hpp"

namespace specrev::synth {

enum class BandShape { gaussian, lorentzian };

struct BandModel {
  double center = 0.0;     // cm⁻¹
  double width = 0.0;      // half width at half maximum, cm⁻¹
  double amplitude = 0.0;  // peak height
  BandShape shape = BandShape::gaussian;

  double evaluate(double wavenumber) const noexcept;

  friend bool operator==(const BandModel&, const BandModel&) = default;
};

struct RawMaterialModel {
  std::string name;
  std::vector<BandModel> bands;
  /// Polynomial in the axis position t ∈ [0, 1]: Σ baseline[k]·tᵏ.
  std::vector<double> baseline;

  Spectrum pure_spectrum(const WavenumberAxis& axis) const;

  friend bool operator==(const RawMaterialModel&, const RawMaterialModel&) = default;
};

struct MixtureSample {
  std::vector<double> composition;  // remainder up to 1 is the diluent
  Spectrum spectrum;
  double noise_sigma = 0.0;
  std::uint64_t seed = 0;
};

/// Seeded band placement: widths in [max(2·step, 6), max(4·step, 16)] cm⁻¹,
/// centers at least 3× the largest width apart. Throws AxisTooNarrow when the
/// bands cannot be placed. `shape` forces every band to one line shape.
RawMaterialModel generate_material(std::uint64_t seed, const WavenumberAxis& axis, int n_bands,
                                   std::optional<BandShape> shape = std::nullopt,
                                   std::string name = {});

/// Σ compositionᵢ·pureᵢ + baseline + N(0, (noise_sigma·max|signal|)²).
/// Throws CompositionInvalid for negative entries or a sum above 1.
MixtureSample mix(std::span<const Spectrum> pure_spectra, std::span<const double> composition,
                  double noise_sigma, std::uint64_t seed, std::span<const double> baseline = {});

MixtureSample mix(std::span<const RawMaterialModel> materials, const WavenumberAxis& axis,
                  std::span<const double> composition, double noise_sigma, std::uint64_t seed);

/// Mixes every row of `compositions` (m × k), seeding row i with seed + i.
SpectrumMatrix mix_batch(std::span<const Spectrum> pure_spectra, const Matrix& compositions,
                         double noise_sigma, std::uint64_t seed);

/// Random composition vectors, uniform on the k-simplex scaled to `total`.
Matrix random_compositions(std::size_t count, std::size_t k, double total, std::uint64_t seed);

/// Series of `count` compositions around `base`: row i scales each entry by
/// an independent U(lo, hi) factor, rescales to a sum of at most 1, then
/// dilutes by 1 / (1 + i mod 3).
Matrix variation_series(std::span<const double> base, std::size_t count, double lo, double hi,
                        std::uint64_t seed);

std::string material_json(const RawMaterialModel& model);
RawMaterialModel material_from_json(const std::string& text);

}  // namespace specrev::synth
