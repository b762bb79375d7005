#include <algorithm>
#include <cmath>

#include "specrev/error.hpp"
#include "specrev/pls.hpp"

namespace specrev::pls {
namespace {

constexpr double kExhausted = 1e-12;

double column_sd(const Matrix& Y, Eigen::Index j, double mean) {
  const auto s = static_cast<double>(Y.rows());
  const double ss = (Y.col(j).array() - mean).square().sum();
  return std::sqrt(ss / (s - 1.0));
}

}  // namespace

bool PlsModel::all_converged() const noexcept {
  return std::all_of(lv_converged.begin(), lv_converged.end(), [](bool b) { return b; });
}

bool operator==(const PlsModel& a, const PlsModel& b) {
  auto same = [](const auto& x, const auto& y) {
    return x.rows() == y.rows() && x.cols() == y.cols() && (x.size() == 0 || x == y);
  };
  return a.n_lv == b.n_lv && a.requested_lv == b.requested_lv && same(a.x_weights, b.x_weights) &&
         same(a.x_loadings, b.x_loadings) && same(a.y_loadings, b.y_loadings) && same(a.x_mean, b.x_mean) &&
         same(a.x_scale, b.x_scale) && same(a.y_mean, b.y_mean) && same(a.y_scale, b.y_scale) &&
         same(a.coefficients, b.coefficients) && same(a.x_scores, b.x_scores) && same(a.fitted, b.fitted) &&
         a.lv_converged == b.lv_converged && a.lv_iterations == b.lv_iterations && a.responses == b.responses;
}

PlsModel fit_nipals(const Matrix& X, const Matrix& Y, std::size_t n_lv, const FitOptions& opt) {
  const Eigen::Index s = X.rows(), n = X.cols(), r = Y.cols();
  if (Y.rows() != s)
    throw Error(ErrorKind::DimensionMismatch,
                "X has " + std::to_string(s) + " rows but Y has " + std::to_string(Y.rows()));
  if (s < 2) throw Error(ErrorKind::TooFewSamples, "PLS needs at least 2 samples, got " + std::to_string(s));
  if (n < 1 || r < 1) throw Error(ErrorKind::DimensionMismatch, "X and Y need at least one column");
  const auto cap = static_cast<std::size_t>(std::min(s - 1, n));
  if (n_lv > cap)
    throw Error(ErrorKind::InvalidArgument,
                "n_lv = " + std::to_string(n_lv) + " exceeds min(s-1, n) = " + std::to_string(cap));
  if (!X.allFinite() || !Y.allFinite()) throw Error(ErrorKind::InvalidArgument, "X and Y must be finite");

  PlsModel m;
  m.requested_lv = n_lv;
  m.x_mean = X.colwise().mean();
  m.x_scale = RowVector::Ones(n);
  m.y_mean = Y.colwise().mean();
  m.y_scale.resize(r);
  for (Eigen::Index j = 0; j < r; ++j) {
    const double sd = column_sd(Y, j, m.y_mean(j));
    if (!(sd > 1e-14 * std::max(1.0, std::abs(m.y_mean(j)))))
      throw Error(ErrorKind::ZeroVarianceColumn, "response column " + std::to_string(j + 1) + " is constant");
    m.y_scale(j) = sd;
  }
  m.responses.resize(static_cast<std::size_t>(r));
  for (Eigen::Index j = 0; j < r; ++j) m.responses[static_cast<std::size_t>(j)] = "y" + std::to_string(j + 1);

  Matrix E = X.rowwise() - m.x_mean;
  Matrix F = (Y.rowwise() - m.y_mean).array().rowwise() / m.y_scale.array();
  const double e0 = E.norm(), f0 = F.norm();
  if (n_lv > 0 && !(e0 > 0.0))
    throw Error(ErrorKind::ZeroVarianceColumn, "every spectral column is constant");

  m.x_weights.resize(n, static_cast<Eigen::Index>(n_lv));
  m.x_loadings.resize(n, static_cast<Eigen::Index>(n_lv));
  m.y_loadings.resize(r, static_cast<Eigen::Index>(n_lv));
  m.x_scores.resize(s, static_cast<Eigen::Index>(n_lv));

  std::size_t a = 0;
  for (; a < n_lv; ++a) {
    if (E.norm() <= kExhausted * e0 || F.norm() <= kExhausted * f0) break;
    Eigen::Index start = 0;
    F.colwise().squaredNorm().maxCoeff(&start);
    Vector u = F.col(start);
    Vector w, t, t_old, q;
    bool converged = false;
    std::size_t it = 0;
    while (it < opt.max_iter) {
      ++it;
      w = E.transpose() * u;
      const double wn = w.norm();
      if (!(wn > 0.0)) break;
      w /= wn;
      t = E * w;
      const double tt = t.squaredNorm();
      q = F.transpose() * t / tt;
      const double qq = q.squaredNorm();
      if (!(qq > 0.0)) break;
      u = F * q / qq;
      if (it > 1 && (t - t_old).norm() <= opt.tol * t.norm()) {
        converged = true;
        break;
      }
      t_old = t;
    }
    if (w.size() == 0 || !(w.norm() > 0.0) || !(t.squaredNorm() > 0.0) || !(q.squaredNorm() > 0.0)) break;
    const double tt = t.squaredNorm();
    const Vector p = E.transpose() * t / tt;
    q = F.transpose() * t / tt;
    const auto col = static_cast<Eigen::Index>(a);
    m.x_weights.col(col) = w;
    m.x_loadings.col(col) = p;
    m.y_loadings.col(col) = q;
    m.x_scores.col(col) = t;
    m.lv_converged.push_back(converged);
    m.lv_iterations.push_back(it);
    E.noalias() -= t * p.transpose();
    F.noalias() -= t * q.transpose();
  }
  m.n_lv = a;
  const auto k = static_cast<Eigen::Index>(a);
  m.x_weights.conservativeResize(n, k);
  m.x_loadings.conservativeResize(n, k);
  m.y_loadings.conservativeResize(r, k);
  m.x_scores.conservativeResize(s, k);
  m.coefficients = coefficients_for(m, a);
  m.fitted = predict(m, X);
  return m;
}

Matrix coefficients_for(const PlsModel& model, std::size_t lv) {
  const Eigen::Index n = model.x_weights.rows(), r = model.y_loadings.rows();
  const auto k = static_cast<Eigen::Index>(std::min(lv, model.n_lv));
  if (k == 0) return Matrix::Zero(n, r);
  const Matrix W = model.x_weights.leftCols(k);
  const Matrix PtW = model.x_loadings.leftCols(k).transpose() * W;
  const Matrix R = W * PtW.partialPivLu().inverse();
  return R * model.y_loadings.leftCols(k).transpose();
}

Matrix predict(const PlsModel& model, const Matrix& X, std::size_t lv) {
  if (static_cast<std::size_t>(X.cols()) != model.features())
    throw Error(ErrorKind::AxisMismatch, "model expects " + std::to_string(model.features()) +
                                             " spectral points, got " + std::to_string(X.cols()));
  if (lv > std::max(model.requested_lv, model.n_lv))
    throw Error(ErrorKind::InvalidArgument, "model was fitted with " + std::to_string(model.requested_lv) +
                                                " latent variables, asked for " + std::to_string(lv));
  const Matrix B = lv >= model.n_lv ? model.coefficients : coefficients_for(model, lv);
  Matrix scaled = (X.rowwise() - model.x_mean) * B;
  Matrix out = scaled.array().rowwise() * model.y_scale.array();
  out.rowwise() += model.y_mean;
  return out;
}

Matrix predict(const PlsModel& model, const Matrix& X) { return predict(model, X, model.n_lv); }

Prediction predict_clipped(const PlsModel& model, const Matrix& X, bool clip) {
  Prediction p{predict(model, X), 0};
  if (!clip) return p;
  for (Eigen::Index i = 0; i < p.values.size(); ++i) {
    double& v = p.values.data()[i];
    if (v < 0.0 || v > 100.0) {
      v = std::clamp(v, 0.0, 100.0);
      ++p.clipped;
    }
  }
  return p;
}

std::vector<PlsModel> fit_pls1(const Matrix& X, const Matrix& Y, std::size_t n_lv, const FitOptions& opt) {
  std::vector<PlsModel> models;
  for (Eigen::Index j = 0; j < Y.cols(); ++j) {
    Matrix y = Y.col(j);
    models.push_back(fit_nipals(X, y, n_lv, opt));
  }
  return models;
}

Matrix predict_pls1(const std::vector<PlsModel>& models, const Matrix& X) {
  Matrix out(X.rows(), static_cast<Eigen::Index>(models.size()));
  for (std::size_t j = 0; j < models.size(); ++j) out.col(static_cast<Eigen::Index>(j)) = predict(models[j], X).col(0);
  return out;
}

}  // namespace specrev::pls
