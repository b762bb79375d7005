#include "specrev/kernels.hpp"

namespace specrev::kernels::scalar {

double dot(const double* a, const double* b, std::size_t n) noexcept {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

double sum(const double* a, std::size_t n) noexcept {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i];
  return acc;
}

double sum_squares(const double* a, std::size_t n) noexcept {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * a[i];
  return acc;
}

double centered_dot(const double* a, const double* b, std::size_t n, double mean_a,
                    double mean_b) noexcept {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += (a[i] - mean_a) * (b[i] - mean_b);
  return acc;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) noexcept {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void shift_scale(double* x, std::size_t n, double shift, double scale) noexcept {
  for (std::size_t i = 0; i < n; ++i) x[i] = (x[i] - shift) * scale;
}

}  // namespace specrev::kernels::scalar
