#pragma once

// Reference library of raw-material spectra (pure plus dilution series) and
// correlation-based identification of query spectra against it.

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "specrev/spectra.hpp"

namespace specrev::speclib {

struct LibrarySpectrum {
  double dilution_pct = 100.0;  // in (0, 100]; 100 is the pure material
  Spectrum spectrum;

  friend bool operator==(const LibrarySpectrum&, const LibrarySpectrum&) = default;
};

struct LibraryEntry {
  std::string name;      // commercial name, unique in a library
  std::string inci;      // INCI name
  std::string supplier;  // producer or reseller
  std::vector<LibrarySpectrum> spectra;

  friend bool operator==(const LibraryEntry&, const LibraryEntry&) = default;
};

struct MatchResult {
  std::string entry_name;
  double dilution_pct = 0.0;
  double correlation = 0.0;  // Pearson, in [-1, 1]
};

inline constexpr double kDefaultMatchThreshold = 0.90;

/// Immutable set of entries whose spectra all live on one axis, normalized.
class LibraryIndex {
 public:
  explicit LibraryIndex(WavenumberAxis axis = WavenumberAxis::instrument_default())
      : axis_(std::move(axis)) {}

  /// Takes entries as stored; throws DuplicateName or AxisMismatch.
  LibraryIndex(WavenumberAxis axis, std::vector<LibraryEntry> entries);

  const WavenumberAxis& axis() const noexcept { return axis_; }
  const std::vector<LibraryEntry>& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  std::size_t spectrum_count() const noexcept;

  const LibraryEntry* find(std::string_view name) const noexcept;

  friend bool operator==(const LibraryIndex&, const LibraryIndex&) = default;

 private:
  WavenumberAxis axis_;
  std::vector<LibraryEntry> entries_;
};

/// Returns a new index with `entry` appended; its spectra are resampled to the
/// index axis, SNV-normalized and ordered by decreasing dilution.
/// Throws DuplicateName, AxisOutOfRange or InvalidArgument (no pure spectrum,
/// repeated or out-of-range dilution levels).
LibraryIndex add_entry(const LibraryIndex& index, LibraryEntry entry);

/// Correlates the normalized query against every stored spectrum, keeps the
/// best spectrum per entry with |corr| ≥ threshold, sorted by descending |corr|.
/// Throws EmptyLibrary.
std::vector<MatchResult> match_spectrum(const LibraryIndex& index, const Spectrum& query,
                                        double threshold = kDefaultMatchThreshold);

/// Writes `manifest.json` and one CSV per stored spectrum under `dir`.
void save(const LibraryIndex& index, const std::filesystem::path& dir);

/// Reads a library directory. A missing manifest yields an empty index on
/// `fallback_axis`. Unknown manifest fields are reported through `warnings`.
/// Throws ManifestParseError (with line/field) or MissingSpectrumFile.
LibraryIndex load(const std::filesystem::path& dir,
                  const WavenumberAxis& fallback_axis = WavenumberAxis::instrument_default(),
                  std::vector<std::string>* warnings = nullptr);

}  // namespace specrev::speclib
