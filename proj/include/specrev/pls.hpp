#pragma once

// NIPALS PLS regression of compositions on spectra, with cross-validation,
// calibration/validation metrics and model persistence.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "specrev/spectra.hpp"
#include "specrev/types.hpp"

namespace specrev::pls {

struct FitOptions {
  double tol = 1e-10;
  std::size_t max_iter = 1000;
};

struct PlsModel {
  std::size_t n_lv = 0;      // latent variables actually extracted
  std::size_t requested_lv = 0;
  Matrix x_weights;          // n × n_lv
  Matrix x_loadings;         // n × n_lv
  Matrix y_loadings;         // r × n_lv, in autoscaled Y units
  RowVector x_mean, x_scale; // x_scale is all ones (X is centered only)
  RowVector y_mean, y_scale;
  Matrix coefficients;       // n × r, maps centered X to autoscaled Y
  Matrix x_scores;           // s × n_lv (training)
  Matrix fitted;             // s × r (training, original units)
  std::vector<bool> lv_converged;
  std::vector<std::size_t> lv_iterations;
  std::vector<std::string> responses;

  std::size_t features() const noexcept { return static_cast<std::size_t>(x_mean.size()); }
  std::size_t response_count() const noexcept { return static_cast<std::size_t>(y_mean.size()); }
  bool all_converged() const noexcept;
};

bool operator==(const PlsModel& a, const PlsModel& b);

/// PLS2 on all responses jointly. X is centered, Y autoscaled.
/// Stops early when the X or Y residual is exhausted.
PlsModel fit_nipals(const Matrix& X, const Matrix& Y, std::size_t n_lv, const FitOptions& opt = {});

/// Coefficient matrix (scaled units) using only the first `lv` components.
Matrix coefficients_for(const PlsModel& model, std::size_t lv);

struct Prediction {
  Matrix values;  // rows = samples, cols = responses
  std::size_t clipped = 0;  // entries moved into [0, 100]
};

Matrix predict(const PlsModel& model, const Matrix& X);
Matrix predict(const PlsModel& model, const Matrix& X, std::size_t lv);
Prediction predict_clipped(const PlsModel& model, const Matrix& X, bool clip);

/// One PLS1 model per response column.
std::vector<PlsModel> fit_pls1(const Matrix& X, const Matrix& Y, std::size_t n_lv, const FitOptions& opt = {});
Matrix predict_pls1(const std::vector<PlsModel>& models, const Matrix& X);

enum class CvKind { leave_one_out, venetian_blinds };

struct CvScheme {
  CvKind kind = CvKind::leave_one_out;
  std::size_t k = 5;  // fold count for venetian blinds

  /// Leave-one-out for s <= 30, otherwise venetian blinds with 5 folds.
  static CvScheme default_for(std::size_t samples);
  std::vector<std::vector<std::size_t>> folds(std::size_t samples) const;
};

std::string to_string(const CvScheme& scheme);
CvScheme parse_cv_scheme(const std::string& text);

struct CvResult {
  CvScheme scheme;
  std::size_t lv_max = 0;
  Matrix rmsecv;           // (lv_max + 1) × r, row lv = 0..lv_max
  Vector rmsecv_total;     // pooled over responses
  Matrix press;            // (lv_max + 1) × r
  std::size_t selected_lv = 0;
  Matrix cv_predictions;   // s × r at selected_lv
};

/// Refits on each fold's retained rows; pick is the smallest lv within 5% of
/// the minimum pooled RMSECV. Throws FoldTooSmall if lv_max does not fit.
CvResult cross_validate(const Matrix& X, const Matrix& Y, const CvScheme& scheme, std::size_t lv_max,
                        const FitOptions& opt = {});

/// Largest lv_max the scheme allows for s samples and n features.
std::size_t max_lv_for(const CvScheme& scheme, std::size_t samples, std::size_t features);

struct MetricsReport {
  std::vector<std::string> responses;
  std::size_t n_lv = 0;
  Vector rmsec, rmsecv, rmsep;  // rmsep empty when no test set
  Vector r2y, q2y;
  bool empty_test_set = false;
  std::vector<bool> q2_flagged;  // q2y > r2y + 0.2
};

MetricsReport metrics(const PlsModel& model, const Matrix& X_cal, const Matrix& Y_cal, const Matrix& X_test,
                      const Matrix& Y_test, const CvScheme& cv, const FitOptions& opt = {});

std::string metrics_csv(const MetricsReport& report);

/// Writes model.json plus coefficients, weights and loadings CSVs into `dir`.
void save_model(const PlsModel& model, const WavenumberAxis& axis, const std::filesystem::path& dir,
                const std::string& preprocess = "none");

struct LoadedModel {
  PlsModel model;
  WavenumberAxis axis;
  std::string preprocess;
};

LoadedModel load_model(const std::filesystem::path& dir);

}  // namespace specrev::pls
