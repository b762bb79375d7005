// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "specrev/bss.hpp"
#include "specrev/cli.hpp"
#include "specrev/design.hpp"
#include "specrev/io.hpp"
#include "specrev/pls.hpp"
#include "specrev/speclib.hpp"
#include "specrev/spectra.hpp"
#include "specrev/synth.hpp"
#include "support.hpp"

using namespace specrev;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

const WavenumberAxis& axis() {
  static const WavenumberAxis a = WavenumberAxis::instrument_default();
  return a;
}

Matrix pure_matrix(const std::vector<Spectrum>& pures) {
  Matrix s(static_cast<long>(pures.size()), static_cast<long>(axis().size()));
  for (std::size_t i = 0; i < pures.size(); ++i)
    for (std::size_t j = 0; j < axis().size(); ++j) s(static_cast<long>(i), static_cast<long>(j)) = pures[i][j];
  return s;
}

std::vector<Spectrum> materials(std::size_t k, std::uint64_t seed) {
  std::vector<Spectrum> out;
  for (std::size_t i = 0; i < k; ++i)
    out.push_back(synth::generate_material(seed * 1000 + i, axis(), 6).pure_spectrum(axis()));
  return out;
}

double min_of(const std::vector<double>& v) { return *std::min_element(v.begin(), v.end()); }

// 1: X = A0 S0 with 3 sources and 10 mixtures, noise-free.
Outcome closed_loop_bss() {
  auto closed_loop = [](std::uint64_t seed, double* residual) {
    const auto pures = materials(3, seed);
    const Matrix s0 = pure_matrix(pures);
    const Matrix a0 = synth::random_compositions(10, 3, 1.0, seed);
    const Matrix x = a0 * s0;
    const auto model = bss::fit_infomax(x, 3, {.seed = seed});
    if (residual) *residual = (x - model.mixing * model.sources).norm() / x.norm();
    return min_of(testing::permutation_matched(s0, model.sources));
  };
  const auto t0 = Clock::now();
  double residual = 0.0;
  const double corr = closed_loop(1, &residual);
  const double secs = seconds_since(t0);

  int ensemble = 0;
  for (std::uint64_t seed = 2; seed <= 51; ++seed) ensemble += closed_loop(seed, nullptr) >= 0.99;

  Outcome o;
  o.pass = residual <= 1e-8 && corr >= 0.99 && secs <= 5.0;
  o.detail = "relative residual " + fmt("%.2e", residual) + " (<= 1e-8), min matched |corr| " + fmt("%.4f", corr) +
             " (>= 0.99), " + fmt("%.2f", secs) + " s (<= 5 s); other seeds reaching 0.99: " +
             std::to_string(ensemble) + "/50";
  return o;
}

// 2: order selection on 20 noisy 3-source datasets.
Outcome order_selection() {
  const auto t0 = Clock::now();
  int hits = 0;
  std::string orders;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto pures = materials(3, 100 + seed);
    const Matrix c = synth::random_compositions(20, 3, 1.0, seed);
    const auto x = synth::mix_batch(pures, c, 0.01, seed);
    const auto rep = bss::ica_by_blocks(x.data(), {.blocks = 2, .f_max = 6, .ica = {.seed = seed}});
    hits += rep.optimal_f == 3;
    orders += std::to_string(rep.optimal_f);
  }
  const double secs = seconds_since(t0);
  Outcome o;
  o.pass = hits >= 18 && secs <= 60.0;
  o.detail = "optimal_f = 3 in " + std::to_string(hits) + "/20 (>= 18), orders " + orders + ", " + fmt("%.1f", secs) +
             " s (<= 60 s)";
  return o;
}

// 3: msc_correct(a·ref + b, ref) = ref over 100 pairs.
Outcome msc_exactness() {
  const auto ref = synth::generate_material(77, axis(), 8).pure_spectrum(axis());
  Rng rng(3);
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const double a = rng.uniform(0.2, 5.0), b = rng.uniform(-10.0, 10.0);
    std::vector<double> v;
    for (double r : ref.intensities()) v.push_back(a * r + b);
    const auto c = msc_correct(Spectrum(axis(), v), ref);
    for (std::size_t i = 0; i < axis().size(); ++i) worst = std::max(worst, std::abs(c[i] - ref[i]));
  }
  return {worst <= 1e-10, "max |corrected - ref| " + fmt("%.2e", worst) + " (<= 1e-10) over 100 pairs"};
}

// 4: design counts, row sums and run floors.
Outcome design_laws() {
  auto binomial = [](std::size_t n, std::size_t k) {
    std::size_t r = 1;
    for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
  };
  bool counts = true;
  double worst = 0.0;
  auto sums = [&](const design::MixtureDesign& d) {
    for (long i = 0; i < d.points.rows(); ++i) worst = std::max(worst, std::abs(d.points.row(i).sum() - 1.0));
  };
  for (std::size_t q = 2; q <= 6; ++q) {
    for (std::size_t m = 1; m <= 4; ++m) {
      const auto d = design::simplex_lattice(q, m);
      counts = counts && d.runs() == binomial(q + m - 1, m);
      sums(d);
    }
    const auto c = design::simplex_centroid(q);
    counts = counts && c.runs() == (std::size_t{1} << q) - 1;
    sums(c);
  }
  const bool floors = design::minimum_runs(3) == 10 && design::minimum_runs(4) == 18 && design::minimum_runs(5) == 30;
  return {counts && worst <= 1e-9 && floors,
          std::string("lattice/centroid counts ") + (counts ? "match" : "differ") + ", max |row sum - 1| " +
              fmt("%.1e", worst) + " (<= 1e-9), minimum_runs 3/4/5 = " + std::to_string(design::minimum_runs(3)) + "/" +
              std::to_string(design::minimum_runs(4)) + "/" + std::to_string(design::minimum_runs(5))};
}

struct PlsRun {
  double rmsec = 0.0, max_err = 0.0, min_r2 = 1.0;
  std::size_t lv = 0;
};

// Calibrates on the 18-run 4-component design, predicts 10 held-out simplex points.
PlsRun pls_run(std::uint64_t seed, double sigma) {
  const auto pures = materials(4, 500 + seed);
  const auto d = design::generate({.q = 4, .bounds = {}, .names = {}}).design;
  const Matrix y = d.points * 100.0;
  const Matrix x = synth::mix_batch(pures, d.points, sigma, seed).data();
  const auto cv = pls::cross_validate(x, y, pls::CvScheme::default_for(d.runs()), 10);
  const auto model = pls::fit_nipals(x, y, cv.selected_lv);
  const auto rep = pls::metrics(model, x, y, Matrix(0, x.cols()), Matrix(0, y.cols()), cv.scheme);

  const Matrix held = synth::random_compositions(10, 4, 1.0, 9000 + seed);
  const Matrix pred = pls::predict(model, synth::mix_batch(pures, held, sigma, 7000 + seed).data());
  PlsRun r;
  r.lv = model.n_lv;
  r.rmsec = rep.rmsec.maxCoeff();
  r.min_r2 = rep.r2y.minCoeff();
  r.max_err = (pred - held * 100.0).cwiseAbs().maxCoeff();
  return r;
}

// 5: noise-free calibration.
Outcome pls_exact() {
  const auto r = pls_run(1, 0.0);
  return {r.rmsec <= 1e-6 && r.max_err <= 1e-4,
          "18 runs, " + std::to_string(r.lv) + " LV, RMSEC " + fmt("%.2e", r.rmsec) + " (<= 1e-6), held-out max error " +
              fmt("%.2e", r.max_err) + " (<= 1e-4) points"};
}

// 6: 1% noise, 20 seeds.
Outcome pls_noise() {
  int ok = 0;
  double worst_r2 = 1.0, worst_err = 0.0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto r = pls_run(seed, 0.01);
    ok += r.min_r2 >= 0.94 && r.max_err <= 2.0;
    worst_r2 = std::min(worst_r2, r.min_r2);
    worst_err = std::max(worst_err, r.max_err);
  }
  return {ok >= 18, std::to_string(ok) + "/20 seeds with R2Y >= 0.94 and held-out |error| <= 2.0 (>= 18); worst R2Y " +
                        fmt("%.4f", worst_r2) + ", worst error " + fmt("%.2f", worst_err) + " points"};
}

// End-to-end CLI scenario ---------------------------------------------------

struct Cli {
  fs::path root;
  std::string failure;

  bool operator()(std::vector<std::string> args) {
    if (!failure.empty()) return false;
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    if (code != 0) {
      failure = "'" + args.at(std::min<std::size_t>(args.size() - 1, 4)) + "' exited " + std::to_string(code) + ": " + err.str();
      while (!failure.empty() && failure.back() == '\n') failure.pop_back();
    }
    return code == 0;
  }
  std::string path(const std::string& rel) const { return (root / rel).string(); }
};

struct Scenario {
  bool ran = false;
  std::string failure;
  std::vector<std::string> identified;
  std::vector<std::string> top_matches;
  double max_error = 0.0;
  double seconds = 0.0;
};

const std::vector<std::string> kTruth{"mat02", "mat05", "mat08", "mat11"};
const char* kTruthComposition = "0.40,0.25,0.03,0.12";

const std::vector<std::string> kReports{
    "id/identification.json", "id/identification.txt",  "id/blocks_correlation.csv", "design/design.json",
    "design/design.txt",      "design/design.csv",      "cal/calibration.json",      "cal/calibration.txt",
    "cal/metrics.csv",        "cal/model/model.json",   "cal/model/coefficients.csv", "q/quantification.json",
    "q/quantification.txt"};

Scenario pipeline(const fs::path& root) {
  const auto t0 = Clock::now();
  Scenario sc;
  Cli run{root, {}};
  const std::string lib = run.path("library");
  const std::string seed = "11";

  // 12-material library, one pure spectrum each.
  for (int i = 1; i <= 12; ++i) {
    char name[8];
    std::snprintf(name, sizeof name, "mat%02d", i);
    run({"--seed", std::to_string(i), "--out", run.path("mats"), "synth", "material", "--name", name});
    run({"--library", lib, "lib", "add", name, run.path(std::string("mats/") + name + ".csv"), "--inci", std::string(name) + " INCI"});
  }
  auto material_args = [&](const std::vector<std::string>& names) {
    std::vector<std::string> a;
    for (const auto& n : names) a.insert(a.end(), {"--material", run.path("mats/" + n + ".json")});
    return a;
  };
  auto with = [](std::vector<std::string> a, const std::vector<std::string>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
  };

  // Unknown: variation series for identification, one spectrum for quantification.
  run(with({"--seed", seed, "--out", run.path("unknown"), "synth", "mix", "--composition", kTruthComposition, "--vary",
            "0.1,1.9", "--count", "12", "--sigma", "0.002", "--name", "series", "--diluent", "water"},
           material_args(kTruth)));
  run(with({"--seed", seed, "--out", run.path("unknown"), "synth", "mix", "--composition", kTruthComposition, "--sigma",
            "0.002", "--name", "unknown", "--diluent", "water"},
           material_args(kTruth)));

  if (run({"--seed", seed, "--library", lib, "--out", run.path("id"), "identify", run.path("unknown/series.csv")})) {
    const auto j = nlohmann::json::parse(io::read_file(run.path("id/identification.json")));
    for (const auto& n : j["identified"]) sc.identified.push_back(n.get<std::string>());
    for (const auto& c : j["components"])
      if (!c["matches"].empty()) sc.top_matches.push_back(c["matches"][0]["name"].get<std::string>());
  }

  // Design over the identified constituents plus water, then calibrate and quantify.
  std::string components;
  for (const auto& n : sc.identified) components += n + ",";
  components += "water";
  run({"--out", run.path("design"), "design", "--components", components});
  run(with({"--seed", seed, "--out", run.path("calspectra"), "synth", "mix", "--design", run.path("design/design.csv"),
            "--sigma", "0.002", "--name", "calibration"},
           material_args(sc.identified)));
  run({"--seed", seed, "--out", run.path("cal"), "calibrate", "--design", run.path("design/design.csv"), "--spectra",
       run.path("calspectra/calibration.csv")});
  if (run({"--seed", seed, "--out", run.path("q"), "quantify", "--model", run.path("cal/model"), "--spectra",
           run.path("unknown/unknown.csv"), "--reference", run.path("unknown/unknown_composition.csv")})) {
    const auto j = nlohmann::json::parse(io::read_file(run.path("q/quantification.json")));
    sc.max_error = j["max_abs_error"].get<double>();
  }
  sc.failure = run.failure;
  sc.ran = run.failure.empty();
  sc.seconds = seconds_since(t0);
  return sc;
}

std::string join(const std::vector<std::string>& v) {
  std::string s;
  for (const auto& x : v) s += (s.empty() ? "" : ",") + x;
  return s;
}

// 7: identify, design, calibrate, quantify.
Outcome end_to_end(const fs::path& root) {
  const auto sc = pipeline(root);
  if (!sc.ran) return {false, "pipeline failed: " + sc.failure};
  const std::set<std::string> truth(kTruth.begin(), kTruth.end());
  std::set<std::string> top(sc.top_matches.begin(), sc.top_matches.end());
  const bool ranked = std::includes(top.begin(), top.end(), truth.begin(), truth.end());
  const bool exact = std::set<std::string>(sc.identified.begin(), sc.identified.end()) == truth;
  return {ranked && exact && sc.max_error <= 2.0 && sc.seconds <= 120.0,
          "top matches {" + join(sc.top_matches) + "} vs truth {" + join(kTruth) + "}, max |error| " +
              fmt("%.3f", sc.max_error) + " (<= 2.0) points, " + fmt("%.1f", sc.seconds) + " s (<= 120 s)"};
}

// 8: the same scenario in another directory gives byte-identical reports.
Outcome determinism(const fs::path& first, const fs::path& second) {
  const auto sc = pipeline(second);
  if (!sc.ran) return {false, "pipeline failed: " + sc.failure};
  std::vector<std::string> differ;
  for (const auto& rel : kReports) {
    if (!fs::exists(first / rel) || !fs::exists(second / rel) ||
        io::read_file(first / rel) != io::read_file(second / rel))
      differ.push_back(rel);
  }
  return {differ.empty(), differ.empty() ? std::to_string(kReports.size()) + " report files byte-identical"
                                         : "differing: " + join(differ)};
}

// 9: library and model round trips.
Outcome persistence(const fs::path& root) {
  speclib::LibraryIndex index(axis());
  for (std::uint64_t i = 0; i < 4; ++i) {
    const auto pure = synth::generate_material(40 + i, axis(), 6).pure_spectrum(axis());
    speclib::LibraryEntry e{"entry " + std::to_string(i), "INCI, " + std::to_string(i), "Supplier", {}};
    for (double d : {100.0, 75.0, 50.0, 25.0, 5.0}) {
      std::vector<double> v;
      for (std::size_t j = 0; j < pure.size(); ++j)
        v.push_back(pure[j] * d / 100.0 + 0.001 * (100.0 - d) * std::cos(0.003 * static_cast<double>(j)));
      e.spectra.push_back({d, Spectrum(axis(), v)});
    }
    index = speclib::add_entry(index, e);
  }
  speclib::save(index, root / "library");
  const bool lib_ok = speclib::load(root / "library") == index;

  const auto pures = materials(3, 900);
  const Matrix c = synth::random_compositions(15, 3, 0.9, 4);
  const Matrix x = synth::mix_batch(pures, c, 0.01, 5).data();
  auto model = pls::fit_nipals(x, c * 100.0, 3);
  model.responses = {"a", "b", "c"};
  pls::save_model(model, axis(), root / "model", "snv_msc");
  const auto back = pls::load_model(root / "model");
  const bool model_ok = back.model == model && back.axis == axis() && back.preprocess == "snv_msc" &&
                        pls::predict(back.model, x) == model.fitted;

  return {lib_ok && model_ok, std::string("library (4 entries x 5 dilutions) ") + (lib_ok ? "equal" : "differs") +
                                  ", PLS model " + (model_ok ? "equal" : "differs") + " after save/load"};
}

}  // namespace

int main() {
  testing::TempDir work("acceptance");
  const fs::path run_a = work.path() / "run_a";
  const fs::path run_b = work.path() / "elsewhere" / "run_b";

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"noise-free BSS closed loop", closed_loop_bss},
      {"ICA-by-blocks order selection", order_selection},
      {"MSC exactness", msc_exactness},
      {"design laws", design_laws},
      {"PLS exact recovery", pls_exact},
      {"PLS under 1% noise", pls_noise},
      {"end-to-end pipeline", [&] { return end_to_end(run_a); }},
      {"determinism", [&] { return determinism(run_a, run_b); }},
      {"persistence", [&] { return persistence(work.path()); }},
  };

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    failed += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  " << (i + 1) << "  " << criteria[i].first << ": " << o.detail
              << std::endl;
  }
  std::cout << (criteria.size() - static_cast<std::size_t>(failed)) << "/" << criteria.size() << " criteria passed"
            << std::endl;
  return failed == 0 ? 0 : 1;
}
