#include <doctest.h>

#include <cmath>
#include <fstream>

#include "specrev/io.hpp"
#include "specrev/spectra.hpp"
#include "support.hpp"

using namespace specrev;

namespace {

Spectrum random_spectrum(const WavenumberAxis& axis, std::uint64_t seed, const std::string& label = "x") {
  return Spectrum(axis, testing::random_vector(axis.size(), seed), label);
}

WavenumberAxis grid(std::initializer_list<double> v) { return WavenumberAxis(std::vector<double>(v)); }

// Closed-form simple linear regression in long double.
std::pair<double, double> ols(std::span<const double> y, std::span<const double> x) {
  const std::size_t n = x.size();
  long double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
    sxx += static_cast<long double>(x[i]) * x[i];
    sxy += static_cast<long double>(x[i]) * y[i];
  }
  const long double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const long double icpt = (sy - slope * sx) / n;
  return {static_cast<double>(slope), static_cast<double>(icpt)};
}

}  // namespace

TEST_CASE("default axis is the instrument grid") {
  const auto axis = WavenumberAxis::instrument_default();
  CHECK(axis.size() == 833);
  CHECK(axis.front() == 150.0);
  CHECK(axis.back() == 3478.0);
  CHECK(axis.min_step() == doctest::Approx(4.0));
}

TEST_CASE("axis and spectrum invariants are enforced") {
  CHECK_ERROR_KIND(grid({1.0}), ErrorKind::InvalidAxis);
  CHECK_ERROR_KIND(grid({1.0, 1.0, 2.0}), ErrorKind::InvalidAxis);
  CHECK_ERROR_KIND(grid({3.0, 2.0}), ErrorKind::InvalidAxis);
  CHECK_ERROR_KIND(grid({1.0, NAN}), ErrorKind::InvalidAxis);
  const auto axis = grid({1.0, 2.0, 3.0});
  CHECK_ERROR_KIND(Spectrum(axis, {1.0, 2.0}), ErrorKind::InvalidSpectrum);
  CHECK_ERROR_KIND(Spectrum(axis, {1.0, INFINITY, 2.0}), ErrorKind::InvalidSpectrum);
  CHECK_ERROR_KIND(Spectrum(axis, {1.0, NAN, 2.0}), ErrorKind::InvalidSpectrum);
}

TEST_CASE("resample") {
  SUBCASE("identity on its own axis") {
    const auto s = random_spectrum(WavenumberAxis::instrument_default(), 1);
    CHECK(resample(s, s.axis()) == s);
  }
  SUBCASE("line sampled at 0 and 10, resampled to 5") {
    const Spectrum line(grid({0.0, 10.0}), {1.0, 21.0});
    const auto r = resample(line, grid({5.0, 10.0}));
    CHECK(r[0] == doctest::Approx(11.0).epsilon(1e-15));
    CHECK(r[1] == 21.0);
  }
  SUBCASE("round trip through a 2x finer grid") {
    const auto axis = WavenumberAxis::instrument_default();
    const auto s = random_spectrum(axis, 2);
    const auto fine = WavenumberAxis::uniform(150, 3478, 2);
    const auto back = resample(resample(s, fine), axis);
    double worst = 0.0;
    for (std::size_t i = 0; i < axis.size(); ++i) worst = std::max(worst, std::abs(back[i] - s[i]));
    CHECK(worst <= 1e-12);
  }
  SUBCASE("target beyond the source range") {
    const Spectrum s(grid({0.0, 10.0}), {1.0, 2.0});
    CHECK_ERROR_KIND(resample(s, grid({-1.0, 5.0})), ErrorKind::AxisOutOfRange);
    CHECK_ERROR_KIND(resample(s, grid({5.0, 11.0})), ErrorKind::AxisOutOfRange);
  }
}

TEST_CASE("normalize") {
  const auto axis = WavenumberAxis::instrument_default();
  const auto x = random_spectrum(axis, 3);
  const auto nx = normalize(x);

  SUBCASE("unit norm and zero mean against direct recomputation") {
    long double sum = 0, ss = 0;
    for (double v : nx.intensities()) {
      sum += v;
      ss += static_cast<long double>(v) * v;
    }
    CHECK(std::abs(static_cast<double>(sum / nx.size())) <= 1e-12);
    CHECK(std::abs(static_cast<double>(std::sqrt(ss)) - 1.0) <= 1e-12);
  }
  SUBCASE("scale and offset invariance") {
    std::vector<double> five, shifted;
    for (double v : x.intensities()) {
      five.push_back(5.0 * v);
      shifted.push_back(v + 7.0);
    }
    const auto n5 = normalize(Spectrum(axis, five));
    const auto n7 = normalize(Spectrum(axis, shifted));
    for (std::size_t i = 0; i < axis.size(); ++i) {
      CHECK(n5[i] == doctest::Approx(nx[i]).epsilon(1e-12));
      CHECK(std::abs(n7[i] - nx[i]) <= 1e-12);
    }
  }
  SUBCASE("idempotent") {
    const auto nn = normalize(nx);
    for (std::size_t i = 0; i < axis.size(); ++i) CHECK(std::abs(nn[i] - nx[i]) <= 1e-12);
  }
  SUBCASE("constant input") {
    CHECK_ERROR_KIND(normalize(Spectrum(axis, std::vector<double>(axis.size(), 4.2))), ErrorKind::DegenerateSpectrum);
  }
}

TEST_CASE("msc_reference is the column mean") {
  const auto axis = WavenumberAxis::uniform(100, 500, 4);
  const Matrix m = testing::random_matrix(10, static_cast<long>(axis.size()), 4);
  const auto ref = msc_reference(SpectrumMatrix(axis, m));
  for (long j = 0; j < m.cols(); ++j) {
    long double s = 0;
    for (long i = 0; i < m.rows(); ++i) s += m(i, j);
    CHECK(ref[static_cast<std::size_t>(j)] == doctest::Approx(static_cast<double>(s / 10)).epsilon(1e-14));
  }
  SUBCASE("identical rows") {
    Matrix two(2, m.cols());
    two.row(0) = m.row(0);
    two.row(1) = m.row(0);
    const auto r = msc_reference(SpectrumMatrix(axis, two));
    for (long j = 0; j < m.cols(); ++j) CHECK(r[static_cast<std::size_t>(j)] == m(0, j));
  }
  SUBCASE("r and -r give a zero spectrum that MSC rejects") {
    Matrix two(2, m.cols());
    two.row(0) = m.row(0);
    two.row(1) = -m.row(0);
    const auto r = msc_reference(SpectrumMatrix(axis, two));
    for (double v : r.intensities()) CHECK(v == 0.0);
    CHECK_ERROR_KIND(msc_correct(random_spectrum(axis, 9), r), ErrorKind::DegenerateReference);
  }
  SUBCASE("needs two rows") {
    CHECK_ERROR_KIND(msc_reference(SpectrumMatrix(axis, m.topRows(1))), ErrorKind::InvalidArgument);
  }
}

TEST_CASE("msc_correct") {
  const auto axis = WavenumberAxis::instrument_default();
  const auto ref = random_spectrum(axis, 5, "ref");
  auto affine = [&](double a, double b) {
    std::vector<double> v;
    for (double r : ref.intensities()) v.push_back(a * r + b);
    return Spectrum(axis, v);
  };
  SUBCASE("spec = ref is unchanged") {
    const auto c = msc_correct(ref, ref);
    for (std::size_t i = 0; i < axis.size(); ++i) CHECK(std::abs(c[i] - ref[i]) <= 1e-12);
  }
  SUBCASE("spec = 2 ref + 3 recovers ref") {
    const auto c = msc_correct(affine(2.0, 3.0), ref);
    for (std::size_t i = 0; i < axis.size(); ++i) CHECK(std::abs(c[i] - ref[i]) <= 1e-10);
  }
  SUBCASE("noisy affine spectrum matches the closed-form OLS fit") {
    Rng rng(11);
    std::vector<double> v;
    for (double r : ref.intensities()) v.push_back(1.7 * r + 0.4 + 0.01 * rng.normal());
    const auto fit = msc_fit(v, ref.intensities());
    const auto [slope, icpt] = ols(v, ref.intensities());
    CHECK(std::abs(fit.slope - slope) <= 1e-9);
    CHECK(std::abs(fit.intercept - icpt) <= 1e-9);
    const auto c = msc_correct(Spectrum(axis, v), ref);
    CHECK(pearson(c.intensities(), ref.intensities()) >= 0.999);
    const auto refit = ols(c.intensities(), ref.intensities());
    CHECK(std::abs(refit.first - 1.0) <= 1e-9);
    CHECK(std::abs(refit.second) <= 1e-9);
  }
  SUBCASE("exact on affine transforms") {
    Rng rng(12);
    for (int t = 0; t < 20; ++t) {
      const double a = rng.uniform(0.2, 5.0) * (t % 2 ? -1.0 : 1.0), b = rng.uniform(-10, 10);
      const auto c = msc_correct(affine(a, b), ref);
      for (std::size_t i = 0; i < axis.size(); ++i) REQUIRE(std::abs(c[i] - ref[i]) <= 1e-10);
    }
  }
  SUBCASE("errors") {
    CHECK_ERROR_KIND(msc_correct(ref, Spectrum(axis, std::vector<double>(axis.size(), 1.0))),
                     ErrorKind::DegenerateReference);
    const auto ax4 = grid({1, 2, 3, 4});
    CHECK_ERROR_KIND(msc_correct(Spectrum(ax4, {1, 1, -1, -1}), Spectrum(ax4, {1, -1, 1, -1})), ErrorKind::NearZeroSlope);
  }
}

TEST_CASE("snv then msc preprocessing keeps the row span for linear mixtures") {
  const auto axis = WavenumberAxis::uniform(100, 300, 2);
  const Matrix S = testing::random_matrix(2, static_cast<long>(axis.size()), 21);
  Matrix X(4, S.cols());
  X.row(0) = 1.0 * S.row(0) + 0.5 * S.row(1);
  X.row(1) = 0.2 * S.row(0) + 1.0 * S.row(1);
  X.row(2) = 0.7 * S.row(0) + 0.7 * S.row(1);
  X.row(3) = 2.0 * S.row(0) + 0.1 * S.row(1);
  const auto P = preprocess_snv_msc(SpectrumMatrix(axis, X));
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(Eigen::MatrixXd(P.data()));
  const auto sv = svd.singularValues();
  CHECK(sv(2) <= 1e-10 * sv(0));
}

TEST_CASE("pearson") {
  const auto a = testing::random_vector(50, 13);
  std::vector<double> neg, flat(50, 2.0);
  for (double v : a) neg.push_back(-3.0 * v + 1.0);
  CHECK(pearson(a, a) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(pearson(a, neg) == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(pearson(a, flat) == 0.0);
  const auto b = testing::random_vector(50, 14);
  CHECK(pearson(a, b) == doctest::Approx(testing::corr(a.data(), b.data(), 50)).epsilon(1e-12));
}

TEST_CASE("spectrum CSV files") {
  testing::TempDir dir("spectra");
  const auto axis = WavenumberAxis::uniform(150, 400, 4);
  const auto s = random_spectrum(axis, 15, "sample_a");

  SUBCASE("single spectrum round trip is bit exact") {
    write_spectrum_csv(dir / "sample_a.csv", s);
    const auto back = read_spectrum_csv(dir / "sample_a.csv");
    CHECK(back == s);
    CHECK(io::read_file(dir / "sample_a.csv").rfind("wavenumber_cm1,intensity\n", 0) == 0);
  }
  SUBCASE("matrix round trip keeps labels") {
    const Matrix m = testing::random_matrix(3, static_cast<long>(axis.size()), 16);
    const SpectrumMatrix mat(axis, m, {"a", "b,with comma", "c"});
    write_matrix_csv(dir / "m.csv", mat);
    const auto back = read_matrix_csv(dir / "m.csv");
    CHECK(back.labels() == mat.labels());
    CHECK(back.data() == mat.data());
    CHECK(back.axis() == axis);
    CHECK(read_any_csv(dir / "m.csv").rows() == 3);
  }
  SUBCASE("byte order mark and comments are accepted") {
    std::ofstream(dir / "bom.csv") << "\xEF\xBB\xBF# exported\nwavenumber_cm1,intensity\n100,1\n104,2\n";
    const auto back = read_spectrum_csv(dir / "bom.csv");
    CHECK(back.size() == 2);
    CHECK(back.label() == "bom");
  }
  SUBCASE("malformed files name the line") {
    std::ofstream(dir / "bad.csv") << "wavenumber_cm1,intensity\n100,1\n104,abc\n";
    try {
      read_spectrum_csv(dir / "bad.csv");
      FAIL("expected a parse error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::ParseError);
      CHECK(std::string(e.what()).find("bad.csv:3") != std::string::npos);
    }
    std::ofstream(dir / "nan.csv") << "wavenumber_cm1,intensity\n100,1\n104,nan\n";
    CHECK_ERROR_KIND(read_spectrum_csv(dir / "nan.csv"), ErrorKind::InvalidSpectrum);
    CHECK_ERROR_KIND(read_spectrum_csv(dir / "missing.csv"), ErrorKind::IoError);
  }
}
