#include <algorithm>
#include <cmath>
#include <sstream>

#include "specrev/error.hpp"
#include "specrev/io.hpp"
#include "specrev/pls.hpp"

namespace specrev::pls {
namespace {

Matrix take_rows(const Matrix& M, const std::vector<std::size_t>& idx) {
  Matrix out(static_cast<Eigen::Index>(idx.size()), M.cols());
  for (std::size_t i = 0; i < idx.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = M.row(static_cast<Eigen::Index>(idx[i]));
  return out;
}

std::size_t max_fold_size(const std::vector<std::vector<std::size_t>>& folds) {
  std::size_t m = 0;
  for (const auto& f : folds) m = std::max(m, f.size());
  return m;
}

Vector sum_sq_dev(const Matrix& Y) {
  const RowVector mean = Y.colwise().mean();
  return (Y.rowwise() - mean).colwise().squaredNorm().transpose();
}

}  // namespace

CvScheme CvScheme::default_for(std::size_t samples) {
  if (samples <= 30) return {CvKind::leave_one_out, 0};
  return {CvKind::venetian_blinds, 5};
}

std::vector<std::vector<std::size_t>> CvScheme::folds(std::size_t samples) const {
  std::vector<std::vector<std::size_t>> out;
  if (kind == CvKind::leave_one_out) {
    for (std::size_t i = 0; i < samples; ++i) out.push_back({i});
    return out;
  }
  if (k < 2) throw Error(ErrorKind::FoldTooSmall, "venetian blinds needs k >= 2");
  if (k > samples)
    throw Error(ErrorKind::FoldTooSmall,
                "venetian blinds with k = " + std::to_string(k) + " needs at least k samples, got " + std::to_string(samples));
  out.resize(k);
  for (std::size_t i = 0; i < samples; ++i) out[i % k].push_back(i);
  return out;
}

std::string to_string(const CvScheme& scheme) {
  if (scheme.kind == CvKind::leave_one_out) return "loo";
  return "venetian:" + std::to_string(scheme.k);
}

CvScheme parse_cv_scheme(const std::string& text) {
  const std::string t = io::trim(text);
  if (t == "loo" || t == "leave_one_out") return {CvKind::leave_one_out, 0};
  for (const std::string prefix : {"venetian:", "venetian_blinds:"}) {
    if (t.rfind(prefix, 0) == 0) {
      const std::string num = t.substr(prefix.size());
      std::size_t k = 0;
      try {
        std::size_t used = 0;
        k = std::stoul(num, &used);
        if (used != num.size()) throw std::invalid_argument(num);
      } catch (const std::exception&) {
        throw Error(ErrorKind::ConfigError, "bad venetian fold count '" + num + "'");
      }
      return {CvKind::venetian_blinds, k};
    }
  }
  throw Error(ErrorKind::ConfigError, "unknown cv scheme '" + t + "' (use loo or venetian:<k>)");
}

std::size_t max_lv_for(const CvScheme& scheme, std::size_t samples, std::size_t features) {
  const auto folds = scheme.folds(samples);
  const std::size_t mf = max_fold_size(folds);
  if (samples < mf + 2) return 0;
  return std::min(samples - mf - 1, features);
}

CvResult cross_validate(const Matrix& X, const Matrix& Y, const CvScheme& scheme, std::size_t lv_max,
                        const FitOptions& opt) {
  const auto s = static_cast<std::size_t>(X.rows());
  if (static_cast<std::size_t>(Y.rows()) != s)
    throw Error(ErrorKind::DimensionMismatch,
                "X has " + std::to_string(s) + " rows but Y has " + std::to_string(Y.rows()));
  const auto folds = scheme.folds(s);
  const std::size_t mf = max_fold_size(folds);
  if (s < mf + 2)
    throw Error(ErrorKind::FoldTooSmall, std::to_string(s) + " samples leave fewer than 2 training rows per fold");
  const std::size_t allowed = std::min(s - mf - 1, static_cast<std::size_t>(X.cols()));
  if (lv_max > allowed)
    throw Error(ErrorKind::FoldTooSmall, "lv_max = " + std::to_string(lv_max) + " exceeds " + std::to_string(allowed) +
                                             " allowed by " + to_string(scheme) + " on " + std::to_string(s) + " samples");

  const Eigen::Index r = Y.cols();
  const auto L = static_cast<Eigen::Index>(lv_max + 1);
  CvResult res;
  res.scheme = scheme;
  res.lv_max = lv_max;
  res.press = Matrix::Zero(L, r);
  std::vector<Matrix> held(static_cast<std::size_t>(L), Matrix::Zero(static_cast<Eigen::Index>(s), r));

  for (const auto& test : folds) {
    std::vector<std::size_t> train;
    for (std::size_t i = 0, j = 0; i < s; ++i) {
      if (j < test.size() && test[j] == i) {
        ++j;
        continue;
      }
      train.push_back(i);
    }
    const Matrix Xt = take_rows(X, train), Yt = take_rows(Y, train);
    const Matrix Xv = take_rows(X, test), Yv = take_rows(Y, test);
    const PlsModel m = fit_nipals(Xt, Yt, lv_max, opt);
    for (Eigen::Index lv = 0; lv < L; ++lv) {
      const Matrix pred = predict(m, Xv, static_cast<std::size_t>(lv));
      res.press.row(lv) += (pred - Yv).colwise().squaredNorm();
      for (std::size_t i = 0; i < test.size(); ++i)
        held[static_cast<std::size_t>(lv)].row(static_cast<Eigen::Index>(test[i])) = pred.row(static_cast<Eigen::Index>(i));
    }
  }
  const auto sd = static_cast<double>(s);
  res.rmsecv = (res.press.array() / sd).sqrt().matrix();
  res.rmsecv_total = (res.press.rowwise().sum().array() / (sd * static_cast<double>(r))).sqrt().matrix();
  const double best = res.rmsecv_total.minCoeff();
  for (Eigen::Index lv = 0; lv < L; ++lv) {
    if (res.rmsecv_total(lv) <= 1.05 * best) {
      res.selected_lv = static_cast<std::size_t>(lv);
      break;
    }
  }
  res.cv_predictions = held[res.selected_lv];
  return res;
}

MetricsReport metrics(const PlsModel& model, const Matrix& X_cal, const Matrix& Y_cal, const Matrix& X_test,
                      const Matrix& Y_test, const CvScheme& cv, const FitOptions& opt) {
  if (static_cast<std::size_t>(Y_cal.cols()) != model.response_count())
    throw Error(ErrorKind::DimensionMismatch, "calibration Y has " + std::to_string(Y_cal.cols()) +
                                                  " responses, model has " + std::to_string(model.response_count()));
  MetricsReport rep;
  rep.responses = model.responses;
  rep.n_lv = model.n_lv;
  const auto s = static_cast<double>(X_cal.rows());
  const Vector sstot = sum_sq_dev(Y_cal);

  const Matrix fit = predict(model, X_cal);
  const Vector ssres = (fit - Y_cal).colwise().squaredNorm().transpose();
  rep.rmsec = (ssres.array() / s).sqrt().matrix();
  rep.r2y = (1.0 - ssres.array() / sstot.array()).matrix();

  const CvResult cvr = cross_validate(X_cal, Y_cal, cv, model.n_lv, opt);
  const Vector press = cvr.press.row(static_cast<Eigen::Index>(model.n_lv)).transpose();
  rep.rmsecv = (press.array() / s).sqrt().matrix();
  rep.q2y = (1.0 - press.array() / sstot.array()).matrix();

  if (X_test.rows() == 0) {
    rep.empty_test_set = true;
  } else {
    if (Y_test.rows() != X_test.rows() || Y_test.cols() != Y_cal.cols())
      throw Error(ErrorKind::DimensionMismatch, "test X and Y shapes disagree");
    const Matrix pred = predict(model, X_test);
    rep.rmsep = ((pred - Y_test).colwise().squaredNorm().transpose().array() / static_cast<double>(X_test.rows()))
                    .sqrt()
                    .matrix();
  }
  for (Eigen::Index j = 0; j < rep.r2y.size(); ++j) rep.q2_flagged.push_back(rep.q2y(j) > rep.r2y(j) + 0.2);
  return rep;
}

std::string metrics_csv(const MetricsReport& report) {
  std::ostringstream os;
  os << "response,RMSEC,RMSECV,RMSEP,R2Y,Q2Y\n";
  for (std::size_t j = 0; j < report.responses.size(); ++j) {
    const auto i = static_cast<Eigen::Index>(j);
    os << io::csv_field(report.responses[j]) << ',' << io::format_double(report.rmsec(i)) << ','
       << io::format_double(report.rmsecv(i)) << ',' << (report.empty_test_set ? "" : io::format_double(report.rmsep(i)))
       << ',' << io::format_double(report.r2y(i)) << ',' << io::format_double(report.q2y(i)) << '\n';
  }
  return os.str();
}

}  // namespace specrev::pls
