#include <algorithm>
#include <ostream>

#include "commands.hpp"
#include "specrev/error.hpp"
#include "specrev/io.hpp"
#include "specrev/speclib.hpp"
#include "text_table.hpp"
#include "util.hpp"

namespace specrev::cli {
namespace {

speclib::LibraryIndex open_library(Context& ctx) {
  std::vector<std::string> warnings;
  auto index = speclib::load(ctx.config.library_path, axis_of(ctx.config), &warnings);
  for (const auto& w : warnings) ctx.err << "warning: " << w << '\n';
  return index;
}

std::string dilution_text(double pct) { return io::format_double(pct) + "%"; }

}  // namespace

int cmd_lib_add(Context& ctx, const LibAddArgs& args) {
  auto index = open_library(ctx);
  std::vector<Spectrum> spectra;
  for (const auto& f : args.files) {
    const SpectrumMatrix m = read_any_csv(f);
    for (std::size_t i = 0; i < m.rows(); ++i) spectra.push_back(m.row(i));
  }
  std::vector<double> dilutions = args.dilutions;
  if (dilutions.empty() && spectra.size() == 1) dilutions = {100.0};
  if (dilutions.size() != spectra.size())
    throw Error(ErrorKind::InvalidArgument, "got " + std::to_string(spectra.size()) + " spectra but " +
                                                std::to_string(dilutions.size()) + " dilution levels");
  speclib::LibraryEntry entry{args.name, args.inci, args.supplier, {}};
  for (std::size_t i = 0; i < spectra.size(); ++i) entry.spectra.push_back({dilutions[i], spectra[i]});
  index = speclib::add_entry(index, std::move(entry));
  speclib::save(index, ctx.config.library_path);
  ctx.out << "added " << args.name << " (" << spectra.size() << " spectra), library now has " << index.size()
          << (index.size() == 1 ? " entry\n" : " entries\n");
  return 0;
}

int cmd_lib_list(Context& ctx) {
  const auto index = open_library(ctx);
  ctx.out << index.size() << (index.size() == 1 ? " entry\n" : " entries\n");
  if (index.empty()) return 0;
  std::vector<const speclib::LibraryEntry*> sorted;
  for (const auto& e : index.entries()) sorted.push_back(&e);
  std::sort(sorted.begin(), sorted.end(), [](auto* a, auto* b) { return a->name < b->name; });
  TextTable t({"name", "inci", "supplier", "spectra"});
  for (const auto* e : sorted) t.add({e->name, e->inci, e->supplier, std::to_string(e->spectra.size())});
  ctx.out << t.render();
  return 0;
}

int cmd_lib_show(Context& ctx, const std::string& name) {
  const auto index = open_library(ctx);
  const auto* e = index.find(name);
  if (!e) throw Error(ErrorKind::UnknownEntry, "no library entry named '" + name + "'");
  ctx.out << "name:     " << e->name << '\n'
          << "inci:     " << e->inci << '\n'
          << "supplier: " << e->supplier << '\n'
          << "spectra:  " << e->spectra.size() << '\n';
  TextTable t({"dilution", "points", "min_cm1", "max_cm1"});
  for (const auto& s : e->spectra)
    t.add({dilution_text(s.dilution_pct), std::to_string(s.spectrum.size()), io::format_double(s.spectrum.axis().front()),
           io::format_double(s.spectrum.axis().back())});
  ctx.out << t.render();
  return 0;
}

}  // namespace specrev::cli
