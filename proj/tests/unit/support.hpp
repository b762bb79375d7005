#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <unistd.h>
#include <filesystem>
#include <numeric>
#include <string>
#include <vector>

#include "specrev/error.hpp"
#include "specrev/rng.hpp"
#include "specrev/types.hpp"

#define CHECK_ERROR_KIND(expr, expected)                 \
  do {                                                   \
    bool thrown_ = false;                                \
    try {                                                \
      (void)(expr);                                      \
    } catch (const specrev::Error& e_) {                 \
      thrown_ = true;                                    \
      CHECK_MESSAGE(e_.kind() == (expected), e_.what()); \
    }                                                    \
    CHECK_MESSAGE(thrown_, #expr " did not throw");      \
  } while (0)

namespace testing {

class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("specrev_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline specrev::Matrix random_matrix(long rows, long cols, std::uint64_t seed) {
  specrev::Rng rng(seed);
  specrev::Matrix m(rows, cols);
  for (long i = 0; i < m.size(); ++i) m.data()[i] = rng.normal();
  return m;
}

inline std::vector<double> random_vector(std::size_t n, std::uint64_t seed) {
  specrev::Rng rng(seed);
  std::vector<double> v(n);
  for (auto& x : v) x = rng.normal();
  return v;
}

/// Independent Pearson correlation in long double.
inline double corr(const double* a, const double* b, std::size_t n) {
  long double ma = 0, mb = 0;
  for (std::size_t i = 0; i < n; ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  long double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  return static_cast<double>(sab / std::sqrt(saa * sbb));
}

/// Best assignment of rows of `est` to rows of `truth` on |corr|, by trying
/// every permutation. Returns the matched |corr| for each truth row.
inline std::vector<double> permutation_matched(const specrev::Matrix& truth, const specrev::Matrix& est) {
  const long k = truth.rows();
  std::vector<int> perm(static_cast<std::size_t>(k));
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<double> best;
  double best_sum = -1.0;
  do {
    std::vector<double> cur;
    double sum = 0.0;
    for (long i = 0; i < k; ++i) {
      const double c = std::abs(corr(truth.row(i).data(), est.row(perm[static_cast<std::size_t>(i)]).data(),
                                     static_cast<std::size_t>(truth.cols())));
      cur.push_back(c);
      sum += c;
    }
    if (sum > best_sum) {
      best_sum = sum;
      best = cur;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

}  // namespace testing
