#include <algorithm>
#include <ostream>
#include <set>

#include "commands.hpp"
#include "specrev/bss.hpp"
#include "specrev/error.hpp"
#include "specrev/io.hpp"
#include "specrev/speclib.hpp"
#include "text_table.hpp"
#include "util.hpp"

namespace specrev::cli {
namespace {

constexpr const char* kUnidentifiedNote = "possible sub-1% constituent or absent from library";
constexpr const char* kAmbiguousNote = "ambiguous - include both in mixture design";

}  // namespace

int cmd_identify(Context& ctx, const IdentifyArgs& args) {
  const PipelineConfig& cfg = ctx.config;
  std::vector<std::string> warnings;
  const auto library = speclib::load(cfg.library_path, axis_of(cfg), &warnings);
  for (const auto& w : warnings) ctx.err << "warning: " << w << '\n';
  if (library.empty())
    throw Error(ErrorKind::EmptyLibrary, "library at " + cfg.library_path.string() + " has no entries");

  const SpectrumMatrix raw = stack_inputs(args.files, library.axis());
  const std::size_t s = raw.rows(), B = cfg.ica.blocks;
  if (s < 2 * B)
    throw Error(ErrorKind::TooFewSamples, "identify needs at least " + std::to_string(2 * B) + " spectra (2 x blocks), got " +
                                              std::to_string(s) + "; supply a dilution series of the unknown");
  const SpectrumMatrix pre = preprocess_snv_msc(raw);

  bss::BlocksOptions bo;
  bo.blocks = B;
  bo.f_max = std::min({cfg.ica.f_max, s / B, pre.cols()});
  bo.threshold = cfg.ica.threshold;
  bo.ica = {cfg.ica.max_iter, cfg.ica.tol, cfg.ica.seed};
  const auto blocks = bss::ica_by_blocks(pre.data(), bo);
  const auto model = bss::fit_infomax(pre.data(), blocks.optimal_f, bo.ica);

  const auto& out_dir = cfg.output_dir;
  ensure_dir(out_dir);
  io::write_file_atomic(out_dir / "blocks_correlation.csv", bss::blocks_table_csv(blocks));
  bss::export_model(model, pre.axis(), raw.labels(), out_dir, "ica");

  Json rep = report_header(ctx, "identify", cfg.ica.seed);
  Json inputs = Json::array();
  for (const auto& f : args.files) inputs.push_back(input_record(f));
  rep["inputs"] = inputs;
  rep["spectra"] = s;
  rep["library"] = {{"entries", library.size()}, {"spectra", library.spectrum_count()}};
  rep["preprocess"] = "snv_msc";
  rep["blocks"] = B;
  rep["f_max"] = bo.f_max;
  rep["block_threshold"] = bo.threshold;
  rep["match_threshold"] = cfg.match_threshold;
  Json table = Json::array();
  for (const auto& row : blocks.table) {
    Json r;
    r["f"] = row.f;
    r["min_abs_corr"] = row.min_correlation;
    r["matched_abs_corr"] = row.matched;
    r["rank_deficient"] = row.rank_deficient;
    r["passes"] = !row.rank_deficient && row.min_correlation >= blocks.threshold;
    table.push_back(r);
  }
  rep["order_table"] = table;
  rep["optimal_f"] = blocks.optimal_f;
  rep["any_order_passed"] = blocks.any_passed;
  rep["ica"] = {{"converged", model.converged},
                {"iterations", model.iterations},
                {"relative_residual", model.relative_residual}};

  std::string text = "identification  config " + config_hash(cfg) + "  seed " + std::to_string(cfg.ica.seed) + "\n";
  text += std::to_string(s) + " spectra, " + std::to_string(B) + " blocks, orders 1.." + std::to_string(bo.f_max) +
          " tested, optimal f = " + std::to_string(blocks.optimal_f) +
          (blocks.any_passed ? "" : " (no order reached the threshold)") + "\n\n";
  TextTable order({"f", "min |corr|", "passes"});
  for (const auto& row : blocks.table)
    order.add({std::to_string(row.f), row.rank_deficient ? "rank-deficient" : fixed(row.min_correlation, 4),
               (!row.rank_deficient && row.min_correlation >= blocks.threshold) ? "yes" : "no"});
  text += order.render() + "\n";

  Json components = Json::array();
  std::vector<std::string> identified;
  std::set<std::string> seen;
  TextTable ics({"ic", "status", "match", "dilution", "corr"});
  for (std::size_t k = 0; k < model.components; ++k) {
    const auto kk = static_cast<Eigen::Index>(k);
    const std::string label = "ic_" + std::to_string(k + 1);
    Spectrum ic(pre.axis(), to_vector(model.sources.row(kk)), label);
    const std::string file = label + ".csv";
    write_spectrum_csv(out_dir / file, ic);

    const auto matches = speclib::match_spectrum(library, ic, cfg.match_threshold);
    const auto best = speclib::match_spectrum(library, ic, 0.0);
    std::string status = matches.empty() ? "unidentified" : (matches.size() >= 2 ? "ambiguous" : "identified");
    Json c;
    c["ic"] = k + 1;
    c["file"] = file;
    c["status"] = status;
    Json ms = Json::array();
    for (const auto& m : matches) {
      ms.push_back({{"name", m.entry_name}, {"dilution_pct", m.dilution_pct}, {"correlation", m.correlation}});
      if (seen.insert(m.entry_name).second) identified.push_back(m.entry_name);
    }
    c["matches"] = ms;
    if (!best.empty()) c["best"] = {{"name", best.front().entry_name}, {"correlation", best.front().correlation}};
    if (matches.empty()) c["note"] = kUnidentifiedNote;
    else if (matches.size() >= 2) c["note"] = kAmbiguousNote;
    components.push_back(c);

    if (matches.empty()) {
      ics.add({std::to_string(k + 1), status, best.empty() ? "-" : "(" + best.front().entry_name + ")", "-",
               best.empty() ? "-" : fixed(best.front().correlation, 4)});
    }
    for (std::size_t i = 0; i < matches.size(); ++i)
      ics.add({i == 0 ? std::to_string(k + 1) : "", i == 0 ? status : "", matches[i].entry_name,
               io::format_double(matches[i].dilution_pct) + "%", fixed(matches[i].correlation, 4)});
  }
  rep["components"] = components;
  rep["identified"] = identified;
  text += ics.render();
  for (const auto& c : components)
    if (c.contains("note")) text += "ic " + std::to_string(c["ic"].get<std::size_t>()) + ": " + c["note"].get<std::string>() + "\n";
  text += "identified: ";
  for (std::size_t i = 0; i < identified.size(); ++i) text += (i ? ", " : "") + identified[i];
  text += identified.empty() ? "none\n" : "\n";

  write_report(out_dir, "identification", rep, text);
  ctx.out << text;
  return 0;
}

}  // namespace specrev::cli
