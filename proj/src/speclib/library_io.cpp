#include <algorithm>
#include <json.hpp>
#include <optional>
#include <set>

#include "specrev/error.hpp"
#include "specrev/io.hpp"
#include "specrev/speclib.hpp"

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

namespace specrev::speclib {

namespace {

std::string file_stem(std::size_t entry_index, const std::string& name) {
  std::string safe;
  for (const char c : name) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                    c == '-' || c == '_';
    safe.push_back(ok ? c : '_');
  }
  char prefix[16];
  std::snprintf(prefix, sizeof(prefix), "e%03zu_", entry_index + 1);
  return prefix + safe;
}

std::string dilution_tag(double pct) {
  std::string s = io::format_double(pct);
  std::replace(s.begin(), s.end(), '.', 'p');
  return s;
}

std::size_t line_of(const std::string& text, std::size_t byte) {
  const auto end = text.begin() + static_cast<std::ptrdiff_t>(std::min(byte, text.size()));
  return 1 + static_cast<std::size_t>(std::count(text.begin(), end, '\n'));
}

[[noreturn]] void manifest_error(const fs::path& manifest, const std::string& where,
                                 const std::string& what) {
  throw Error(ErrorKind::ManifestParseError, manifest.string() + ": " + where + ": " + what);
}

std::string string_field(const nlohmann::json& obj, const char* key, const fs::path& manifest,
                         const std::string& where, bool required) {
  if (!obj.contains(key)) {
    if (required) manifest_error(manifest, where, std::string("missing field '") + key + "'");
    return {};
  }
  if (!obj.at(key).is_string())
    manifest_error(manifest, where, std::string("field '") + key + "' must be a string");
  return obj.at(key).get<std::string>();
}

void warn_unknown(const nlohmann::json& obj, std::initializer_list<std::string_view> known,
                  const std::string& where, std::vector<std::string>* warnings) {
  if (warnings == nullptr) return;
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (std::find(known.begin(), known.end(), it.key()) == known.end())
      warnings->push_back(where + ": ignoring unknown field '" + it.key() + "'");
}

}  // namespace

void save(const LibraryIndex& index, const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir / "spectra", ec);
  if (ec) throw Error(ErrorKind::IoError, "cannot create library directory '" + dir.string() + "'");

  ojson manifest = ojson::array();
  for (std::size_t i = 0; i < index.entries().size(); ++i) {
    const auto& e = index.entries()[i];
    ojson je;
    je["name"] = e.name;
    je["inci"] = e.inci;
    je["supplier"] = e.supplier;
    je["spectra"] = ojson::array();
    for (const auto& s : e.spectra) {
      const std::string rel =
          "spectra/" + file_stem(i, e.name) + "_d" + dilution_tag(s.dilution_pct) + ".csv";
      write_spectrum_csv(dir / rel, s.spectrum);
      ojson js;
      js["dilution_pct"] = s.dilution_pct;
      js["file"] = rel;
      je["spectra"].push_back(js);
    }
    manifest.push_back(je);
  }
  io::write_file_atomic(dir / "manifest.json", manifest.dump(2) + "\n");
}

LibraryIndex load(const fs::path& dir, const WavenumberAxis& fallback_axis,
                  std::vector<std::string>* warnings) {
  const fs::path manifest_path = dir / "manifest.json";
  if (!fs::exists(manifest_path)) return LibraryIndex(fallback_axis);
  const std::string text = io::read_file(manifest_path);

  nlohmann::json manifest;
  try {
    manifest = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    manifest_error(manifest_path, "line " + std::to_string(line_of(text, e.byte)),
                   "malformed JSON");
  }
  if (!manifest.is_array())
    manifest_error(manifest_path, "line 1", "top level must be an array of entries");

  std::vector<LibraryEntry> entries;
  std::optional<WavenumberAxis> axis;
  std::set<std::string> names;

  for (std::size_t i = 0; i < manifest.size(); ++i) {
    const auto& je = manifest[i];
    const std::string where = "entry " + std::to_string(i + 1);
    if (!je.is_object()) manifest_error(manifest_path, where, "must be an object");
    warn_unknown(je, {"name", "inci", "supplier", "spectra"}, where, warnings);
    LibraryEntry entry;
    entry.name = string_field(je, "name", manifest_path, where, true);
    entry.inci = string_field(je, "inci", manifest_path, where, false);
    entry.supplier = string_field(je, "supplier", manifest_path, where, false);
    if (!names.insert(entry.name).second)
      throw Error(ErrorKind::DuplicateName,
                  manifest_path.string() + ": " + where + ": duplicate name '" + entry.name + "'");
    if (!je.contains("spectra") || !je.at("spectra").is_array())
      manifest_error(manifest_path, where, "field 'spectra' must be an array");
    const auto& jspectra = je.at("spectra");
    for (std::size_t k = 0; k < jspectra.size(); ++k) {
      const auto& js = jspectra[k];
      const std::string swhere = where + " ('" + entry.name + "'), spectrum " + std::to_string(k + 1);
      if (!js.is_object()) manifest_error(manifest_path, swhere, "must be an object");
      warn_unknown(js, {"dilution_pct", "file"}, swhere, warnings);
      if (!js.contains("dilution_pct") || !js.at("dilution_pct").is_number())
        manifest_error(manifest_path, swhere, "field 'dilution_pct' must be a number");
      const double pct = js.at("dilution_pct").get<double>();
      const std::string rel = string_field(js, "file", manifest_path, swhere, true);
      const fs::path file = dir / rel;
      if (!fs::exists(file))
        throw Error(ErrorKind::MissingSpectrumFile,
                    "'" + file.string() + "' referenced by " + swhere + " does not exist");
      Spectrum spec = read_spectrum_csv(file);
      if (!axis) axis = spec.axis();
      if (!(spec.axis() == *axis)) spec = normalize(resample(spec, *axis));
      spec.set_label(entry.name);
      entry.spectra.push_back({pct, std::move(spec)});
    }
    entries.push_back(std::move(entry));
  }
  return LibraryIndex(axis.value_or(fallback_axis), std::move(entries));
}

}  // namespace specrev::speclib
