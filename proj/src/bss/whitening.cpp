#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "specrev/bss.hpp"
#include "specrev/error.hpp"

namespace specrev::bss {

Whitened whiten(const Matrix& x, std::size_t f) {
  const auto s = static_cast<std::size_t>(x.rows());
  const auto n = static_cast<std::size_t>(x.cols());
  if (f < 1 || f > std::min(s, n))
    throw Error(ErrorKind::InvalidArgument,
                "component count " + std::to_string(f) + " outside [1, min(s, n)] = [1, " +
                    std::to_string(std::min(s, n)) + "]");

  Whitened out;
  WhiteningTransform& t = out.transform;
  t.row_means = x.rowwise().mean();
  const Matrix centered = x.colwise() - t.row_means;
  const Eigen::MatrixXd cov = (centered * centered.transpose()) / static_cast<double>(n);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
  if (es.info() != Eigen::Success)
    throw Error(ErrorKind::RankDeficient, "covariance eigendecomposition failed");
  // Eigen sorts ascending; flip to descending.
  const Vector ascending = es.eigenvalues();
  t.eigenvalues = ascending.reverse();
  const Eigen::MatrixXd vectors = es.eigenvectors().rowwise().reverse();

  const double lambda_max = t.eigenvalues(0);
  std::size_t nonzero = 0;
  if (lambda_max > 0.0)
    for (Eigen::Index i = 0; i < t.eigenvalues.size(); ++i)
      if (t.eigenvalues(i) > 1e-10 * lambda_max) ++nonzero;
  if (nonzero < f)
    throw Error(ErrorKind::RankDeficient, "only " + std::to_string(nonzero) +
                                              " nonzero covariance eigenvalues for " +
                                              std::to_string(f) + " requested components");

  const auto fi = static_cast<Eigen::Index>(f);
  const Vector top = t.eigenvalues.head(fi);
  const Eigen::MatrixXd basis = vectors.leftCols(fi);
  t.projection = top.cwiseSqrt().cwiseInverse().asDiagonal() * basis.transpose();
  t.dewhitening = basis * top.cwiseSqrt().asDiagonal();
  const double total = std::max(t.eigenvalues.cwiseMax(0.0).sum(), lambda_max);
  t.explained_variance = top / total;
  out.data = t.projection * centered;
  return out;
}

}  // namespace specrev::bss
