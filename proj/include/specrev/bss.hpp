#pragma once

// Blind source separation of a spectra matrix X (s mixtures × n wavenumbers)
// into X ≈ A·S: whitening, InfoMax ICA with Gram-Schmidt deflation,
// least-squares mixing recovery A = X·Sᵀ(S·Sᵀ)⁻¹, and ICA-by-blocks
// model-order selection.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "specrev/spectra.hpp"
#include "specrev/types.hpp"

namespace specrev::bss {

struct WhiteningTransform {
  Vector row_means;           // s, mean of each row across wavenumbers
  Matrix projection;          // f × s, maps centered X to whitened rows
  Matrix dewhitening;         // s × f, pseudo-inverse of projection
  Vector eigenvalues;         // all s covariance eigenvalues, descending
  Vector explained_variance;  // f ratios λ_k / Σλ
};

struct Whitened {
  Matrix data;  // f × n with data·dataᵀ/n = I
  WhiteningTransform transform;
};

/// Throws RankDeficient when fewer than f eigenvalues exceed 1e-10·λmax.
Whitened whiten(const Matrix& x, std::size_t f);

struct IcaOptions {
  std::size_t max_iter = 500;  // per component
  double tol = 1e-6;           // on the change of the unit direction
  std::uint64_t seed = 0;
};

struct IcaModel {
  std::size_t components = 0;
  Matrix unmixing;    // W, f × s
  Matrix sources;     // S = W·X, f × n, unit-norm rows
  Matrix mixing;      // A, s × f
  Matrix directions;  // f × f orthonormal rows in the whitened domain
  Vector objective;   // final mean log g'(y) per component
  double residual = 0.0;           // ‖X − A·S‖_F
  double relative_residual = 0.0;  // ‖X − A·S‖_F / ‖X‖_F
  bool converged = false;
  std::size_t iterations = 0;  // summed over components
  std::uint64_t seed = 0;
};

/// InfoMax with the logistic nonlinearity: each direction w maximizes
/// mean log g'(wᵀz) on whitened data by projected gradient ascent (step halved
/// whenever the objective drops), re-orthogonalized by Gram-Schmidt against
/// earlier directions after every step. Sources are unit-normalized with the
/// largest-magnitude element positive and ordered by decreasing ‖A_k‖.
/// Non-convergence is reported through `converged`, not thrown.
IcaModel fit_infomax(const Matrix& x, std::size_t f, const IcaOptions& opts = {});

struct MixingEstimate {
  Matrix mixing;  // s × f
  double residual = 0.0;
  double relative_residual = 0.0;
};

/// A = X·Sᵀ(S·Sᵀ)⁻¹. Throws SingularSources when cond(S·Sᵀ) ≥ 1e12.
MixingEstimate estimate_mixing(const Matrix& x, const Matrix& sources);

struct BlocksOptions {
  std::size_t blocks = 2;
  std::size_t f_max = 6;
  double threshold = 0.80;  // on the minimum matched |corr|
  IcaOptions ica;
};

struct OrderResult {
  std::size_t f = 0;
  /// Matched inter-block |corr| per component, descending; with more than two
  /// blocks each entry is the minimum over block pairs.
  std::vector<double> matched;
  double min_correlation = 0.0;
  bool rank_deficient = false;
};

struct IcaByBlocksReport {
  std::size_t blocks = 0;
  std::vector<std::size_t> tested_orders;
  std::vector<OrderResult> table;
  std::size_t optimal_f = 1;
  double threshold = 0.0;
  bool any_passed = false;
};

/// Splits rows into near-equal contiguous blocks, fits ICA per block for each
/// order 1..f_max, matches ICs across blocks greedily on |corr|, and selects
/// the largest order whose minimum matched |corr| reaches the threshold.
/// Orders beyond the data rank are recorded as failing. Throws TooFewSamples.
IcaByBlocksReport ica_by_blocks(const Matrix& x, const BlocksOptions& opts);

/// Greedy assignment on |corr| between the rows of a and b (same count);
/// returns matched |corr| values sorted descending.
std::vector<double> match_components(const Matrix& a, const Matrix& b);

/// Writes `<stem>_sources.csv` (spectra-matrix layout, one column per IC),
/// `<stem>_mixing.csv` (one row per sample) and `<stem>.json`.
void export_model(const IcaModel& model, const WavenumberAxis& axis,
                  const std::vector<std::string>& sample_labels, const std::filesystem::path& dir,
                  const std::string& stem = "ica");

std::string blocks_table_csv(const IcaByBlocksReport& report);

}  // namespace specrev::bss
