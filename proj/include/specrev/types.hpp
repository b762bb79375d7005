#pragma once

#include <Eigen/Dense>

namespace specrev {

// Rows are spectra (or samples), so row-major keeps each spectrum contiguous.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;

}  // namespace specrev
