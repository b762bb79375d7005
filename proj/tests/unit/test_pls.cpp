#include <doctest.h>

#include <Eigen/QR>

#include "specrev/design.hpp"
#include "specrev/pls.hpp"
#include "specrev/synth.hpp"
#include "support.hpp"

using namespace specrev;
using namespace specrev::pls;

namespace {

double rmse(const Matrix& a, const Matrix& b) { return std::sqrt((a - b).squaredNorm() / static_cast<double>(a.size())); }

struct SynthSet {
  std::vector<Spectrum> pures;
  WavenumberAxis axis = WavenumberAxis::instrument_default();
};

SynthSet materials(std::size_t k, std::uint64_t seed) {
  SynthSet set;
  for (std::size_t i = 0; i < k; ++i)
    set.pures.push_back(synth::generate_material(seed + 17 * i, set.axis, 6).pure_spectrum(set.axis));
  return set;
}

Matrix spectra(const SynthSet& set, const Matrix& comps, double sigma, std::uint64_t seed) {
  return synth::mix_batch(set.pures, comps, sigma, seed).data();
}

}  // namespace

TEST_CASE("fit_nipals on exactly linear data") {
  const Matrix A = testing::random_matrix(20, 3, 1);
  const Matrix P = testing::random_matrix(3, 40, 2);
  const Matrix X = A * P;
  const Matrix Y = X * testing::random_matrix(40, 2, 3);

  const auto m = fit_nipals(X, Y, 3);
  CHECK(m.n_lv == 3);
  CHECK(m.all_converged());
  CHECK(rmse(m.fitted, Y) <= 1e-8);

  SUBCASE("scores are mutually orthogonal") {
    const Matrix g = m.x_scores.transpose() * m.x_scores;
    for (long i = 0; i < 3; ++i)
      for (long j = 0; j < 3; ++j)
        if (i != j) CHECK(std::abs(g(i, j)) <= 1e-10 * std::sqrt(g(i, i) * g(j, j)));
  }
  SUBCASE("weights are orthonormal") {
    CHECK((m.x_weights.transpose() * m.x_weights - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff() <= 1e-10);
  }
  SUBCASE("training fit is exhausted beyond the rank") {
    const auto m5 = fit_nipals(X, Y, 5);
    CHECK(m5.requested_lv == 5);
    CHECK(m5.n_lv == 3);
  }
}

TEST_CASE("fit_nipals with zero components predicts the means") {
  const Matrix X = testing::random_matrix(12, 8, 4);
  const Matrix Y = testing::random_matrix(12, 2, 5);
  const auto m = fit_nipals(X, Y, 0);
  for (long i = 0; i < 12; ++i)
    for (long j = 0; j < 2; ++j) CHECK(std::abs(m.fitted(i, j) - Y.col(j).mean()) <= 1e-12);
  const auto rep = metrics(m, X, Y, Matrix(0, 8), Matrix(0, 2), CvScheme{});
  for (long j = 0; j < 2; ++j) {
    const double mean = Y.col(j).mean();
    const double pop_sd = std::sqrt((Y.col(j).array() - mean).square().sum() / 12.0);
    CHECK(rep.rmsec(j) == doctest::Approx(pop_sd).epsilon(1e-12));
    CHECK(std::abs(rep.r2y(j)) <= 1e-12);
  }
  CHECK(rep.empty_test_set);
}

TEST_CASE("fit_nipals against independent oracles") {
  SUBCASE("one component PLS1 is the projection on X'y") {
    const Matrix X = testing::random_matrix(15, 6, 6);
    const Matrix Y = testing::random_matrix(15, 1, 7);
    Matrix Xc = X;
    Xc.rowwise() -= X.colwise().mean();
    const Eigen::VectorXd yc = Y.col(0).array() - Y.col(0).mean();
    Eigen::VectorXd w = Xc.transpose() * yc;
    w.normalize();
    const Eigen::VectorXd t = Xc * w;
    const Eigen::VectorXd expected = t * (t.dot(yc) / t.dot(t)) + Eigen::VectorXd::Constant(15, Y.col(0).mean());
    const auto m = fit_nipals(X, Y, 1);
    for (long i = 0; i < 15; ++i) CHECK(m.fitted(i, 0) == doctest::Approx(expected(i)).epsilon(1e-10));
  }
  SUBCASE("full rank equals ordinary least squares") {
    const Matrix X = testing::random_matrix(30, 5, 8);
    const Matrix Y = testing::random_matrix(30, 2, 9);
    Eigen::MatrixXd design(30, 6);
    design.col(0).setOnes();
    design.rightCols(5) = X;
    const Eigen::MatrixXd beta = design.colPivHouseholderQr().solve(Eigen::MatrixXd(Y));
    const Eigen::MatrixXd ols = design * beta;
    const auto m = fit_nipals(X, Y, 5);
    CHECK((m.fitted - ols).cwiseAbs().maxCoeff() <= 1e-9);
  }
  SUBCASE("PLS2 with one response equals PLS1") {
    const Matrix X = testing::random_matrix(15, 10, 10);
    const Matrix Y = testing::random_matrix(15, 2, 11);
    const auto per = fit_pls1(X, Y, 3);
    REQUIRE(per.size() == 2);
    const auto joint0 = fit_nipals(X, Y.leftCols(1), 3);
    CHECK((per[0].fitted - joint0.fitted).cwiseAbs().maxCoeff() <= 1e-12);
    const Matrix p = predict_pls1(per, X);
    CHECK((p.col(1) - per[1].fitted.col(0)).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("RMSEC does not increase with more components") {
  const Matrix X = testing::random_matrix(25, 30, 12);
  const Matrix Y = testing::random_matrix(25, 3, 13);
  double prev = std::numeric_limits<double>::infinity();
  for (std::size_t lv = 0; lv <= 10; ++lv) {
    const double e = rmse(fit_nipals(X, Y, lv).fitted, Y);
    CHECK(e <= prev + 1e-12);
    prev = e;
  }
}

TEST_CASE("synthetic design spectra are recovered exactly") {
  const auto set = materials(4, 20);
  const auto d = design::simplex_lattice(4, 2);
  REQUIRE(d.runs() == 10);
  const Matrix Y = d.points * 100.0;
  const Matrix X = spectra(set, d.points, 0.0, 1);
  const auto m = fit_nipals(X, Y, 4);
  CHECK(rmse(m.fitted, Y) <= 1e-6);

  const Matrix held = synth::random_compositions(5, 4, 1.0, 21);
  const Matrix pred = predict(m, spectra(set, held, 0.0, 2));
  CHECK((pred - held * 100.0).cwiseAbs().maxCoeff() <= 1e-4);
}

TEST_CASE("predict") {
  const Matrix X = testing::random_matrix(12, 20, 14);
  const Matrix Y = testing::random_matrix(12, 2, 15);
  const auto m = fit_nipals(X, Y, 3);

  SUBCASE("training rows reproduce the fit bit for bit") { CHECK(predict(m, X) == m.fitted); }
  SUBCASE("duplicate rows give duplicate predictions") {
    Matrix x2(2, 20);
    x2.row(0) = X.row(4);
    x2.row(1) = X.row(4);
    const Matrix p = predict(m, x2);
    CHECK(p.row(0) == p.row(1));
  }
  SUBCASE("truncated models") {
    CHECK(coefficients_for(m, 3) == m.coefficients);
    CHECK((predict(m, X, 1) - fit_nipals(X, Y, 1).fitted).cwiseAbs().maxCoeff() <= 1e-10);
    CHECK_ERROR_KIND(predict(m, X, 4), ErrorKind::InvalidArgument);
  }
  SUBCASE("clipping into [0, 100]") {
    const Matrix Yc = Y * 80.0;
    const auto mc = fit_nipals(X, Yc, 3);
    const auto raw = predict(mc, X);
    const auto clipped = predict_clipped(mc, X, true);
    std::size_t outside = 0;
    for (long i = 0; i < raw.size(); ++i) outside += raw.data()[i] < 0.0 || raw.data()[i] > 100.0;
    CHECK(clipped.clipped == outside);
    CHECK(outside > 0);
    CHECK(clipped.values.minCoeff() >= 0.0);
    CHECK(clipped.values.maxCoeff() <= 100.0);
    CHECK(predict_clipped(mc, X, false).values == raw);
  }
  SUBCASE("feature count mismatch") { CHECK_ERROR_KIND(predict(m, testing::random_matrix(2, 19, 1)), ErrorKind::AxisMismatch); }
}

TEST_CASE("fit_nipals errors") {
  const Matrix X = testing::random_matrix(6, 5, 16);
  CHECK_ERROR_KIND(fit_nipals(X.topRows(1), Matrix::Ones(1, 1), 0), ErrorKind::TooFewSamples);
  Matrix Y = testing::random_matrix(6, 2, 17);
  Y.col(1).setConstant(3.0);
  CHECK_ERROR_KIND(fit_nipals(X, Y, 1), ErrorKind::ZeroVarianceColumn);
  CHECK_ERROR_KIND(fit_nipals(Matrix::Ones(6, 5), testing::random_matrix(6, 1, 1), 1), ErrorKind::ZeroVarianceColumn);
  CHECK_ERROR_KIND(fit_nipals(X, testing::random_matrix(6, 1, 1), 6), ErrorKind::InvalidArgument);
  CHECK_ERROR_KIND(fit_nipals(X, testing::random_matrix(5, 1, 1), 1), ErrorKind::DimensionMismatch);
}

TEST_CASE("cross-validation schemes") {
  CHECK(CvScheme::default_for(30).kind == CvKind::leave_one_out);
  CHECK(CvScheme::default_for(31).kind == CvKind::venetian_blinds);
  CHECK(to_string(CvScheme{}) == "loo");
  CHECK(to_string(parse_cv_scheme("venetian:7")) == "venetian:7");
  CHECK_ERROR_KIND(parse_cv_scheme("kfold"), ErrorKind::ConfigError);
  CHECK_ERROR_KIND(parse_cv_scheme("venetian:x"), ErrorKind::ConfigError);

  for (const auto& scheme : {CvScheme{}, CvScheme{CvKind::venetian_blinds, 5}, CvScheme{CvKind::venetian_blinds, 3}}) {
    const auto folds = scheme.folds(23);
    std::vector<int> seen(23, 0);
    for (const auto& f : folds)
      for (std::size_t i : f) ++seen[i];
    for (int c : seen) CHECK(c == 1);
  }
  const auto vb = CvScheme{CvKind::venetian_blinds, 5}.folds(12);
  CHECK(vb[2] == std::vector<std::size_t>{2, 7});
}

TEST_CASE("cross_validate") {
  SUBCASE("noise-free data selects the true rank") {
    const Matrix T = testing::random_matrix(20, 3, 30);
    const Matrix X = T * testing::random_matrix(3, 50, 31);
    const Matrix Y = T * testing::random_matrix(3, 2, 32);
    const auto cv = cross_validate(X, Y, CvScheme{}, 6);
    CHECK(cv.selected_lv == 3);
    CHECK(cv.rmsecv_total(3) <= 1e-8);
    CHECK(cv.rmsecv_total(2) > 1e-3);
    CHECK(cv.rmsecv.rows() == 7);
  }
  SUBCASE("pure-noise responses select the mean model") {
    int ok = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      // 20 spectra on the 833-point default grid.
      const Matrix X = testing::random_matrix(20, 833, 100 + seed);
      const Matrix Y = testing::random_matrix(20, 1, 200 + seed);
      const auto cv = cross_validate(X, Y, CvScheme{}, 5);
      const auto m = fit_nipals(X, Y, cv.selected_lv);
      const auto rep = metrics(m, X, Y, Matrix(0, 833), Matrix(0, 1), CvScheme{});
      ok += cv.selected_lv == 0 && rep.q2y(0) <= 0.0;
    }
    CHECK(ok >= 18);
  }
  SUBCASE("five-component synthetic mixtures with leave-one-out") {
    const auto set = materials(5, 40);
    const Matrix c = synth::random_compositions(25, 5, 1.0, 41);
    const Matrix X = spectra(set, c, 0.01, 42);
    const auto cv = cross_validate(X, c * 100.0, CvScheme{}, 10);
    CHECK(cv.selected_lv >= 4);
    CHECK(cv.selected_lv <= 6);
  }
  SUBCASE("folds too small") {
    const Matrix X = testing::random_matrix(3, 10, 50);
    const Matrix Y = testing::random_matrix(3, 1, 51);
    CHECK_ERROR_KIND(cross_validate(X, Y, CvScheme{}, 2), ErrorKind::FoldTooSmall);
    CHECK_NOTHROW(cross_validate(X, Y, CvScheme{}, 1));
    CHECK(max_lv_for(CvScheme{}, 3, 10) == 1);
    CHECK_ERROR_KIND(cross_validate(X.topRows(2), Y.topRows(2), CvScheme{}, 0), ErrorKind::FoldTooSmall);
  }
}

TEST_CASE("metrics") {
  const Matrix T = testing::random_matrix(15, 2, 60);
  const Matrix X = T * testing::random_matrix(2, 30, 61);
  const Matrix Y = T * testing::random_matrix(2, 2, 62);
  const auto m = fit_nipals(X, Y, 2);
  const Matrix Tt = testing::random_matrix(4, 2, 63);
  const auto rep = metrics(m, X, Y, Tt * testing::random_matrix(2, 30, 61), Tt * testing::random_matrix(2, 2, 62),
                           CvScheme{});
  CHECK_FALSE(rep.empty_test_set);
  for (long j = 0; j < 2; ++j) {
    CHECK(rep.rmsec(j) <= 1e-10);
    CHECK(rep.rmsep(j) <= 1e-10);
    CHECK(rep.r2y(j) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rep.q2y(j) == doctest::Approx(1.0).epsilon(1e-12));
  }
  const auto csv = metrics_csv(rep);
  CHECK(csv.rfind("response,RMSEC,RMSECV,RMSEP,R2Y,Q2Y\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
}

TEST_CASE("model persistence") {
  testing::TempDir dir("pls");
  const auto set = materials(3, 70);
  const Matrix c = synth::random_compositions(12, 3, 0.9, 71);
  const Matrix X = spectra(set, c, 0.01, 72);
  auto m = fit_nipals(X, c * 100.0, 3);
  m.responses = {"SLES", "CAPB, 30%", "Glyceryl \"oleate\""};
  save_model(m, set.axis, dir / "model", "snv");
  const auto back = load_model(dir / "model");
  CHECK(back.model == m);
  CHECK(back.axis == set.axis);
  CHECK(back.preprocess == "snv");
  CHECK(predict(back.model, X) == m.fitted);
  CHECK_ERROR_KIND(load_model(dir / "missing"), ErrorKind::IoError);
  CHECK_ERROR_KIND(save_model(m, WavenumberAxis::uniform(0, 100, 1), dir / "bad"), ErrorKind::AxisMismatch);
}
