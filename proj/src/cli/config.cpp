#include <charconv>
#include <cmath>
#include <sstream>

#include "specrev/cli.hpp"
#include "specrev/error.hpp"
#include "specrev/io.hpp"

namespace specrev::cli {
namespace {

[[noreturn]] void fail(const std::string& where, const std::string& msg) {
  throw Error(ErrorKind::ConfigError, where + ": " + msg);
}

std::string unquote(const std::string& v) {
  if (v.size() >= 2 && (v.front() == '"' || v.front() == '\'') && v.back() == v.front())
    return v.substr(1, v.size() - 2);
  return v;
}

double to_double(const std::string& where, const std::string& v) {
  double d = 0.0;
  if (!io::parse_double(v, d) || !std::isfinite(d)) fail(where, "expected a number, got '" + v + "'");
  return d;
}

std::uint64_t to_uint(const std::string& where, const std::string& v) {
  std::uint64_t u = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), u);
  if (ec != std::errc{} || p != v.data() + v.size()) fail(where, "expected a non-negative integer, got '" + v + "'");
  return u;
}

bool to_bool(const std::string& where, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  fail(where, "expected true or false, got '" + v + "'");
}

}  // namespace

AxisSpec parse_axis(const std::string& text) {
  const auto f = io::split_csv_line(text);
  if (f.size() != 3) throw Error(ErrorKind::ConfigError, "axis must be 'min,max,step', got '" + text + "'");
  AxisSpec a{to_double("axis", f[0]), to_double("axis", f[1]), to_double("axis", f[2])};
  if (!(a.step > 0.0) || !(a.max > a.min))
    throw Error(ErrorKind::ConfigError, "axis needs max > min and step > 0, got '" + text + "'");
  return a;
}

std::map<std::string, design::Bounds> parse_bounds(const std::string& text) {
  std::map<std::string, design::Bounds> out;
  for (const auto& item : io::split_csv_line(text)) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    const auto colon = item.find(':', eq == std::string::npos ? 0 : eq);
    if (eq == std::string::npos || colon == std::string::npos)
      throw Error(ErrorKind::ConfigError, "bounds entries must be 'name=lower:upper', got '" + item + "'");
    const std::string name = io::trim(item.substr(0, eq));
    design::Bounds b{to_double("bounds", io::trim(item.substr(eq + 1, colon - eq - 1))),
                     to_double("bounds", io::trim(item.substr(colon + 1)))};
    if (name.empty()) throw Error(ErrorKind::ConfigError, "bounds entry without a component name");
    out[name] = b;
  }
  return out;
}

PipelineConfig parse_config(const std::string& text, const std::string& origin) {
  PipelineConfig c;
  std::istringstream is(text);
  std::string line, section;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const std::string where = origin + ":" + std::to_string(lineno);
    // Inline comments start at whitespace followed by '#' or ';'.
    for (std::size_t i = 1; i < line.size(); ++i)
      if ((line[i] == '#' || line[i] == ';') && (line[i - 1] == ' ' || line[i - 1] == '\t')) {
        line.erase(i);
        break;
      }
    std::string t = io::trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    if (t.front() == '[') {
      if (t.back() != ']') fail(where, "unterminated section header");
      section = io::trim(t.substr(1, t.size() - 2));
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos) fail(where, "expected 'key = value'");
    const std::string key = io::trim(t.substr(0, eq));
    const std::string value = unquote(io::trim(t.substr(eq + 1)));
    const std::string full = section.empty() ? key : section + "." + key;

    if (full == "library_path" || full == "library.path") c.library_path = value;
    else if (full == "output_dir" || full == "output.dir") c.output_dir = value;
    else if (full == "seed") c.seed = to_uint(where, value);
    else if (full == "axis") c.axis = parse_axis(value);
    else if (full == "axis.min") { c.axis = c.axis.value_or(AxisSpec{}); c.axis->min = to_double(where, value); }
    else if (full == "axis.max") { c.axis = c.axis.value_or(AxisSpec{}); c.axis->max = to_double(where, value); }
    else if (full == "axis.step") { c.axis = c.axis.value_or(AxisSpec{}); c.axis->step = to_double(where, value); }
    else if (full == "ica.blocks" || full == "ica.B") c.ica.blocks = to_uint(where, value);
    else if (full == "ica.f_max") c.ica.f_max = to_uint(where, value);
    else if (full == "ica.threshold") c.ica.threshold = to_double(where, value);
    else if (full == "ica.seed") c.ica.seed = to_uint(where, value);
    else if (full == "ica.max_iter") c.ica.max_iter = to_uint(where, value);
    else if (full == "ica.tol") c.ica.tol = to_double(where, value);
    else if (full == "match.threshold") c.match_threshold = to_double(where, value);
    else if (full == "design.kind") c.design_kind = value;
    else if (full == "design.bounds") c.bounds = parse_bounds(value);
    else if (full == "pls.cv") c.cv = value;
    else if (full == "pls.lv_max") c.lv_max = to_uint(where, value);
    else if (full == "pls.preprocess") c.preprocess = value;
    else if (full == "pls.clip") c.clip = to_bool(where, value);
    else fail(where, "unknown setting '" + full + "'");
  }
  validate(c);
  return c;
}

PipelineConfig load_config(const std::filesystem::path& path) {
  return parse_config(io::read_file(path), path.string());
}

void validate(const PipelineConfig& c) {
  auto unit = [](const char* name, double v) {
    if (!(v >= 0.0 && v <= 1.0))
      throw Error(ErrorKind::ConfigError, std::string(name) + " must be in [0, 1], got " + io::format_double(v));
  };
  unit("ica.threshold", c.ica.threshold);
  unit("match.threshold", c.match_threshold);
  if (c.ica.blocks < 2) throw Error(ErrorKind::ConfigError, "ica.blocks must be >= 2");
  if (c.ica.f_max < 1) throw Error(ErrorKind::ConfigError, "ica.f_max must be >= 1");
  if (c.ica.max_iter < 1 || !(c.ica.tol > 0.0)) throw Error(ErrorKind::ConfigError, "ica.max_iter and ica.tol must be positive");
  if (c.preprocess != "none" && c.preprocess != "snv" && c.preprocess != "snv_msc")
    throw Error(ErrorKind::ConfigError, "pls.preprocess must be none, snv or snv_msc, got '" + c.preprocess + "'");
  if (c.design_kind != "centroid" && c.design_kind != "centroid_augmented" && c.design_kind.rfind("lattice", 0) != 0)
    throw Error(ErrorKind::ConfigError, "design.kind must be centroid, centroid_augmented or lattice:<m>");
  for (const auto& [name, b] : c.bounds) {
    unit(("bounds lower of " + name).c_str(), b.lower);
    unit(("bounds upper of " + name).c_str(), b.upper);
  }
  if (c.axis) {
    if (!(c.axis->step > 0.0) || !(c.axis->max > c.axis->min))
      throw Error(ErrorKind::ConfigError, "axis needs max > min and step > 0");
  }
}

std::string canonical(const PipelineConfig& c) {
  std::ostringstream os;
  const auto d = [](double v) { return io::format_double(v); };
  if (c.axis) os << "axis=" << d(c.axis->min) << ',' << d(c.axis->max) << ',' << d(c.axis->step) << '\n';
  else os << "axis=default\n";
  os << "design.kind=" << c.design_kind << '\n';
  for (const auto& [name, b] : c.bounds) os << "design.bounds." << name << '=' << d(b.lower) << ':' << d(b.upper) << '\n';
  os << "ica.blocks=" << c.ica.blocks << '\n'
     << "ica.f_max=" << c.ica.f_max << '\n'
     << "ica.max_iter=" << c.ica.max_iter << '\n'
     << "ica.seed=" << c.ica.seed << '\n'
     << "ica.threshold=" << d(c.ica.threshold) << '\n'
     << "ica.tol=" << d(c.ica.tol) << '\n'
     << "match.threshold=" << d(c.match_threshold) << '\n'
     << "pls.clip=" << (c.clip ? "true" : "false") << '\n'
     << "pls.cv=" << c.cv << '\n'
     << "pls.lv_max=" << c.lv_max << '\n'
     << "pls.preprocess=" << c.preprocess << '\n'
     << "seed=" << c.seed << '\n';
  return os.str();
}

std::string config_hash(const PipelineConfig& config) { return io::hex64(io::fnv1a64(canonical(config))); }

}  // namespace specrev::cli
