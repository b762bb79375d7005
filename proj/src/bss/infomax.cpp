#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "specrev/bss.hpp"
#include "specrev/error.hpp"
#include "specrev/kernels.hpp"
#include "specrev/rng.hpp"

namespace specrev::bss {

namespace {

// Logistic g: log g'(y) = -|y| - 2·log(1 + e^{-|y|}),  d/dy = -tanh(y/2).
inline double log_logistic_density(double y) noexcept {
  const double a = std::abs(y);
  return -a - 2.0 * std::log1p(std::exp(-a));
}

class Contrast {
 public:
  explicit Contrast(const Matrix& z)
      : z_(z), f_(static_cast<std::size_t>(z.rows())), n_(static_cast<std::size_t>(z.cols())),
        y_(n_), psi_(n_) {}

  double value(const Vector& w) {
    project(w);
    double acc = 0.0;
    for (const double v : y_) acc += log_logistic_density(v);
    return acc / static_cast<double>(n_);
  }

  Vector gradient(const Vector& w) {
    project(w);
    for (std::size_t j = 0; j < n_; ++j) psi_[j] = -std::tanh(0.5 * y_[j]);
    Vector g(static_cast<Eigen::Index>(f_));
    for (std::size_t k = 0; k < f_; ++k)
      g(static_cast<Eigen::Index>(k)) = kernels::dot(row(k), psi_) / static_cast<double>(n_);
    return g;
  }

 private:
  std::span<const double> row(std::size_t k) const { return {z_.data() + k * n_, n_}; }

  void project(const Vector& w) {
    std::fill(y_.begin(), y_.end(), 0.0);
    for (std::size_t k = 0; k < f_; ++k)
      kernels::axpy(w(static_cast<Eigen::Index>(k)), row(k), y_);
  }

  const Matrix& z_;
  std::size_t f_;
  std::size_t n_;
  std::vector<double> y_;
  std::vector<double> psi_;
};

void orthogonalize(Vector& w, const Matrix& previous, Eigen::Index count) {
  for (int pass = 0; pass < 2; ++pass)
    for (Eigen::Index j = 0; j < count; ++j) {
      const auto d = previous.row(j).transpose();
      w -= w.dot(d) * d;
    }
}

}  // namespace

IcaModel fit_infomax(const Matrix& x, std::size_t f, const IcaOptions& opts) {
  if (opts.max_iter < 1 || !(opts.tol > 0.0))
    throw Error(ErrorKind::InvalidArgument, "ICA needs max_iter >= 1 and tol > 0");
  const Whitened white = whiten(x, f);
  const Matrix& z = white.data;
  const auto fi = static_cast<Eigen::Index>(f);

  IcaModel model;
  model.components = f;
  model.seed = opts.seed;
  model.converged = true;
  model.directions = Matrix::Zero(fi, fi);
  model.objective = Vector::Zero(fi);

  Rng rng(opts.seed);
  Contrast contrast(z);

  for (Eigen::Index k = 0; k < fi; ++k) {
    Vector w(fi);
    double norm = 0.0;
    while (norm < 1e-6) {
      for (Eigen::Index i = 0; i < fi; ++i) w(i) = rng.normal();
      orthogonalize(w, model.directions, k);
      norm = w.norm();
    }
    w /= norm;

    double value = contrast.value(w);
    double step = 1.0;
    bool done = false;
    for (std::size_t it = 0; it < opts.max_iter && !done; ++it) {
      ++model.iterations;
      Vector grad = contrast.gradient(w);
      grad -= grad.dot(w) * w;
      orthogonalize(grad, model.directions, k);
      if (grad.norm() <= 1e-14) {
        done = true;
        break;
      }
      bool accepted = false;
      Vector candidate(fi);
      double candidate_value = value;
      while (!accepted && step > 1e-12) {
        candidate = w + step * grad;
        orthogonalize(candidate, model.directions, k);
        candidate.normalize();
        candidate_value = contrast.value(candidate);
        if (candidate_value >= value)
          accepted = true;
        else
          step *= 0.5;
      }
      if (!accepted) {
        // No ascent direction left at machine precision: stationary point.
        done = true;
        break;
      }
      const double change = (candidate - w).norm();
      w = candidate;
      value = candidate_value;
      step = std::min(step * 2.0, 1e3);
      if (change < opts.tol) done = true;
    }
    if (!done) model.converged = false;
    model.directions.row(k) = w.transpose();
    model.objective(k) = value;
  }

  model.unmixing = model.directions * white.transform.projection;
  model.sources = model.unmixing * x;
  for (Eigen::Index k = 0; k < fi; ++k) {
    const double norm = model.sources.row(k).norm();
    if (!(norm > 0.0))
      throw Error(ErrorKind::RankDeficient, "extracted source " + std::to_string(k + 1) +
                                                " is identically zero");
    Eigen::Index peak = 0;
    model.sources.row(k).cwiseAbs().maxCoeff(&peak);
    const double sign = model.sources(k, peak) < 0.0 ? -1.0 : 1.0;
    model.sources.row(k) *= sign / norm;
    model.unmixing.row(k) *= sign / norm;
    model.directions.row(k) *= sign;
  }

  MixingEstimate est = estimate_mixing(x, model.sources);

  std::vector<Eigen::Index> order(static_cast<std::size_t>(fi));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return est.mixing.col(a).norm() > est.mixing.col(b).norm();
  });
  IcaModel sorted = model;
  sorted.mixing.resize(est.mixing.rows(), fi);
  for (Eigen::Index k = 0; k < fi; ++k) {
    const Eigen::Index from = order[static_cast<std::size_t>(k)];
    sorted.sources.row(k) = model.sources.row(from);
    sorted.unmixing.row(k) = model.unmixing.row(from);
    sorted.directions.row(k) = model.directions.row(from);
    sorted.objective(k) = model.objective(from);
    sorted.mixing.col(k) = est.mixing.col(from);
  }
  sorted.residual = est.residual;
  sorted.relative_residual = est.relative_residual;
  return sorted;
}

MixingEstimate estimate_mixing(const Matrix& x, const Matrix& sources) {
  if (x.cols() != sources.cols())
    throw Error(ErrorKind::DimensionMismatch,
                "X has " + std::to_string(x.cols()) + " columns but S has " +
                    std::to_string(sources.cols()));
  if (sources.rows() < 1 || sources.rows() > sources.cols())
    throw Error(ErrorKind::SingularSources, "source matrix cannot have full row rank");
  const Eigen::MatrixXd gram = sources * sources.transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram, Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues().minCoeff();
  const double hi = es.eigenvalues().maxCoeff();
  if (!(lo > 0.0) || hi / lo >= 1e12)
    throw Error(ErrorKind::SingularSources,
                "S·Sᵀ is numerically singular (condition " + std::to_string(hi / lo) + ")");

  MixingEstimate out;
  const Eigen::MatrixXd rhs = sources * x.transpose();
  const Eigen::MatrixXd at = gram.ldlt().solve(rhs);
  out.mixing = at.transpose();
  out.residual = (x - out.mixing * sources).norm();
  const double xn = x.norm();
  out.relative_residual = xn > 0.0 ? out.residual / xn : out.residual;
  return out;
}

}  // namespace specrev::bss
