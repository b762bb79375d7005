#include "specrev/speclib.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "specrev/error.hpp"

namespace specrev::speclib {

LibraryIndex::LibraryIndex(WavenumberAxis axis, std::vector<LibraryEntry> entries)
    : axis_(std::move(axis)), entries_(std::move(entries)) {
  std::set<std::string> names;
  for (const auto& e : entries_) {
    if (!names.insert(e.name).second)
      throw Error(ErrorKind::DuplicateName, "library already has an entry named '" + e.name + "'");
    for (const auto& s : e.spectra)
      if (!(s.spectrum.axis() == axis_))
        throw Error(ErrorKind::AxisMismatch,
                    "entry '" + e.name + "' has a spectrum off the library axis");
  }
}

std::size_t LibraryIndex::spectrum_count() const noexcept {
  std::size_t n = 0;
  for (const auto& e : entries_) n += e.spectra.size();
  return n;
}

const LibraryEntry* LibraryIndex::find(std::string_view name) const noexcept {
  for (const auto& e : entries_)
    if (e.name == name) return &e;
  return nullptr;
}

LibraryIndex add_entry(const LibraryIndex& index, LibraryEntry entry) {
  if (entry.name.empty()) throw Error(ErrorKind::InvalidArgument, "entry name is empty");
  if (index.find(entry.name) != nullptr)
    throw Error(ErrorKind::DuplicateName,
                "library already has an entry named '" + entry.name + "'");
  if (entry.spectra.empty())
    throw Error(ErrorKind::InvalidArgument, "entry '" + entry.name + "' has no spectra");

  std::set<double> levels;
  bool has_pure = false;
  for (auto& s : entry.spectra) {
    if (!(s.dilution_pct > 0.0 && s.dilution_pct <= 100.0))
      throw Error(ErrorKind::InvalidArgument,
                  "entry '" + entry.name + "': dilution " + std::to_string(s.dilution_pct) +
                      "% outside (0, 100]");
    if (!levels.insert(s.dilution_pct).second)
      throw Error(ErrorKind::InvalidArgument, "entry '" + entry.name + "': dilution " +
                                                  std::to_string(s.dilution_pct) +
                                                  "% appears twice");
    has_pure = has_pure || s.dilution_pct == 100.0;
    Spectrum resampled = resample(s.spectrum, index.axis());
    s.spectrum = normalize(resampled);
    s.spectrum.set_label(entry.name);
  }
  if (!has_pure)
    throw Error(ErrorKind::InvalidArgument,
                "entry '" + entry.name + "' has no pure (100%) spectrum");
  std::sort(entry.spectra.begin(), entry.spectra.end(),
            [](const LibrarySpectrum& a, const LibrarySpectrum& b) {
              return a.dilution_pct > b.dilution_pct;
            });

  std::vector<LibraryEntry> entries = index.entries();
  entries.push_back(std::move(entry));
  return LibraryIndex(index.axis(), std::move(entries));
}

std::vector<MatchResult> match_spectrum(const LibraryIndex& index, const Spectrum& query,
                                        double threshold) {
  if (index.empty()) throw Error(ErrorKind::EmptyLibrary, "library has no entries");
  if (!(threshold >= 0.0 && threshold <= 1.0))
    throw Error(ErrorKind::InvalidArgument, "match threshold must lie in [0, 1]");
  const Spectrum q = normalize(resample(query, index.axis()));

  std::vector<MatchResult> results;
  for (const auto& entry : index.entries()) {
    MatchResult best{entry.name, 0.0, 0.0};
    bool any = false;
    for (const auto& s : entry.spectra) {
      const double r = pearson(q.intensities(), s.spectrum.intensities());
      if (!any || std::abs(r) > std::abs(best.correlation)) {
        best.correlation = r;
        best.dilution_pct = s.dilution_pct;
        any = true;
      }
    }
    if (any && std::abs(best.correlation) >= threshold) results.push_back(best);
  }
  std::stable_sort(results.begin(), results.end(), [](const MatchResult& a, const MatchResult& b) {
    const double ra = std::abs(a.correlation);
    const double rb = std::abs(b.correlation);
    if (ra != rb) return ra > rb;
    return a.entry_name < b.entry_name;
  });
  return results;
}

}  // namespace specrev::speclib
