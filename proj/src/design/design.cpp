#include "specrev/design.hpp"

#include <cmath>
#include <algorithm>
#include <bit>
#include <numeric>
#include <sstream>

#include "specrev/error.hpp"
#include "specrev/io.hpp"

namespace specrev::design {
namespace {

constexpr double kDupTol = 1e-9;
constexpr double kSumTol = 1e-9;

std::vector<std::string> default_names(std::size_t q) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < q; ++i) names.push_back("c" + std::to_string(i + 1));
  return names;
}

MixtureDesign from_rows(std::size_t q, const std::vector<std::vector<double>>& rows) {
  MixtureDesign d;
  d.components = default_names(q);
  d.bounds.assign(q, Bounds{});
  d.points.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(q));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < q; ++j)
      d.points(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  return d;
}

bool contains_row(const Matrix& points, Eigen::Index used, const RowVector& row) {
  for (Eigen::Index i = 0; i < used; ++i)
    if ((points.row(i) - row).cwiseAbs().maxCoeff() <= kDupTol) return true;
  return false;
}

void lattice_rec(std::size_t q, std::size_t m, std::size_t remaining, std::vector<std::size_t>& cur,
                 std::vector<std::vector<double>>& out) {
  if (cur.size() + 1 == q) {
    cur.push_back(remaining);
    std::vector<double> row(q);
    for (std::size_t j = 0; j < q; ++j) row[j] = static_cast<double>(cur[j]) / static_cast<double>(m);
    out.push_back(std::move(row));
    cur.pop_back();
    return;
  }
  for (std::size_t k = remaining + 1; k-- > 0;) {
    cur.push_back(k);
    lattice_rec(q, m, remaining - k, cur, out);
    cur.pop_back();
  }
}

void check_q(std::size_t q) {
  if (q < 2) throw Error(ErrorKind::InvalidArgument, "mixture designs need q >= 2, got " + std::to_string(q));
}

}  // namespace

MixtureDesign simplex_lattice(std::size_t q, std::size_t m) {
  check_q(q);
  if (m < 1) throw Error(ErrorKind::InvalidArgument, "lattice degree must be >= 1");
  std::vector<std::vector<double>> rows;
  std::vector<std::size_t> cur;
  lattice_rec(q, m, m, cur, rows);
  return from_rows(q, rows);
}

MixtureDesign simplex_centroid(std::size_t q) {
  check_q(q);
  if (q > 12) throw Error(ErrorKind::InvalidArgument, "simplex_centroid supports q <= 12, got " + std::to_string(q));
  std::vector<std::vector<double>> rows;
  const std::size_t full = (std::size_t{1} << q) - 1;
  // Ordered by subset size, then by mask with the first component as the high bit.
  for (std::size_t size = 1; size <= q; ++size) {
    std::vector<std::size_t> masks;
    for (std::size_t mask = 1; mask <= full; ++mask)
      if (static_cast<std::size_t>(std::popcount(mask)) == size) masks.push_back(mask);
    std::sort(masks.begin(), masks.end(), [q](std::size_t a, std::size_t b) {
      for (std::size_t j = 0; j < q; ++j) {
        const bool ia = (a >> j) & 1U, ib = (b >> j) & 1U;
        if (ia != ib) return ia;
      }
      return false;
    });
    for (std::size_t mask : masks) {
      std::vector<double> row(q, 0.0);
      for (std::size_t j = 0; j < q; ++j)
        if ((mask >> j) & 1U) row[j] = 1.0 / static_cast<double>(size);
      rows.push_back(std::move(row));
    }
  }
  return from_rows(q, rows);
}

MixtureDesign centroid_augmented(std::size_t q) {
  MixtureDesign d = simplex_centroid(q);
  const auto n = static_cast<Eigen::Index>(q);
  const Eigen::Index base = d.points.rows();
  d.points.conservativeResize(base + n, n);
  const double qd = static_cast<double>(q);
  for (Eigen::Index i = 0; i < n; ++i) {
    d.points.row(base + i).setConstant(1.0 / (2.0 * qd));
    d.points(base + i, i) = (qd + 1.0) / (2.0 * qd);
  }
  return d;
}

std::size_t minimum_runs(std::size_t q) {
  switch (q) {
    case 2: return 6;
    case 3: return 10;
    case 4: return 18;
    case 5: return 30;
    default:
      throw Error(ErrorKind::UnsupportedQ, "minimum_runs is defined for q in {2,3,4,5}, got " + std::to_string(q));
  }
}

MixtureDesign augment_to(MixtureDesign design, std::size_t floor) {
  const std::size_t q = design.q();
  check_q(q);
  if (design.runs() >= floor) return design;
  const auto n = static_cast<Eigen::Index>(q);
  const RowVector centroid = RowVector::Constant(n, 1.0 / static_cast<double>(q));
  Eigen::Index used = design.points.rows();
  design.points.conservativeResize(static_cast<Eigen::Index>(floor), n);
  // Dyadic levels 1/2, 1/4, 3/4, 1/8, 3/8, ... fill the centroid-vertex segments.
  for (std::size_t denom = 2; used < static_cast<Eigen::Index>(floor); denom *= 2) {
    if (denom > (std::size_t{1} << 40))
      throw Error(ErrorKind::InvalidArgument, "cannot augment design to " + std::to_string(floor) + " runs");
    const std::vector<std::size_t> nums = [denom] {
      std::vector<std::size_t> v;
      if (denom == 2) return std::vector<std::size_t>{1};
      for (std::size_t k = 1; k < denom; k += 2) v.push_back(k);
      return v;
    }();
    for (std::size_t k : nums) {
      const double t = static_cast<double>(k) / static_cast<double>(denom);
      for (Eigen::Index v = 0; v < n && used < static_cast<Eigen::Index>(floor); ++v) {
        RowVector p = (1.0 - t) * centroid;
        p(v) += t;
        if (contains_row(design.points, used, p)) continue;
        design.points.row(used++) = p;
      }
      if (used >= static_cast<Eigen::Index>(floor)) break;
    }
  }
  return design;
}

BoundedDesign apply_bounds(const MixtureDesign& design, std::span<const Bounds> bounds) {
  const std::size_t q = design.q();
  if (bounds.size() != q)
    throw Error(ErrorKind::DimensionMismatch,
                "expected " + std::to_string(q) + " bounds, got " + std::to_string(bounds.size()));
  double lo_sum = 0.0, hi_sum = 0.0;
  for (std::size_t j = 0; j < q; ++j) {
    const Bounds& b = bounds[j];
    if (!(b.lower >= 0.0 && b.upper <= 1.0 && b.lower <= b.upper))
      throw Error(ErrorKind::InfeasibleBounds, "bounds for '" + design.components[j] + "' must satisfy 0 <= lower <= upper <= 1");
    lo_sum += b.lower;
    hi_sum += b.upper;
  }
  if (!(lo_sum < 1.0))
    throw Error(ErrorKind::InfeasibleBounds, "sum of lower bounds = " + io::format_double(lo_sum) + " >= 1");
  if (!(hi_sum > 1.0))
    throw Error(ErrorKind::InfeasibleBounds, "sum of upper bounds = " + io::format_double(hi_sum) + " <= 1");

  BoundedDesign out;
  out.design.components = design.components;
  out.design.bounds.assign(bounds.begin(), bounds.end());
  const auto n = static_cast<Eigen::Index>(q);
  out.design.points.resize(design.points.rows(), n);
  const double scale = 1.0 - lo_sum;
  Eigen::Index kept = 0;
  for (Eigen::Index i = 0; i < design.points.rows(); ++i) {
    std::vector<double> x(q);
    bool ok = true;
    for (Eigen::Index j = 0; j < n; ++j) {
      const Bounds& b = bounds[static_cast<std::size_t>(j)];
      x[static_cast<std::size_t>(j)] = b.lower + scale * design.points(i, j);
      if (x[static_cast<std::size_t>(j)] > b.upper + 1e-12) ok = false;
    }
    if (!ok) {
      out.rejected.push_back(std::move(x));
      continue;
    }
    for (Eigen::Index j = 0; j < n; ++j) out.design.points(kept, j) = x[static_cast<std::size_t>(j)];
    ++kept;
  }
  out.design.points.conservativeResize(kept, n);
  return out;
}

BoundedDesign generate(const DesignSpec& spec) {
  const std::size_t q = spec.q;
  MixtureDesign base;
  switch (spec.kind) {
    case DesignKind::lattice: base = simplex_lattice(q, spec.degree); break;
    case DesignKind::centroid: base = simplex_centroid(q); break;
    case DesignKind::centroid_augmented: base = centroid_augmented(q); break;
  }
  base = augment_to(std::move(base), minimum_runs(q));
  if (!spec.names.empty()) {
    if (spec.names.size() != q)
      throw Error(ErrorKind::DimensionMismatch,
                  "expected " + std::to_string(q) + " component names, got " + std::to_string(spec.names.size()));
    base.components = spec.names;
  }
  if (spec.bounds.empty()) {
    std::vector<Bounds> trivial(q);
    return apply_bounds(base, trivial);
  }
  return apply_bounds(base, spec.bounds);
}

std::string design_csv(const MixtureDesign& design) {
  std::ostringstream os;
  const bool trivial = std::all_of(design.bounds.begin(), design.bounds.end(),
                                   [](const Bounds& b) { return b == Bounds{}; });
  if (!trivial) {
    for (std::size_t j = 0; j < design.q(); ++j)
      os << "#bounds: " << io::csv_field(design.components[j]) << ',' << io::format_double(design.bounds[j].lower) << ','
         << io::format_double(design.bounds[j].upper) << '\n';
  }
  for (std::size_t j = 0; j < design.q(); ++j) os << (j ? "," : "") << io::csv_field(design.components[j]);
  os << '\n';
  for (Eigen::Index i = 0; i < design.points.rows(); ++i) {
    for (Eigen::Index j = 0; j < design.points.cols(); ++j)
      os << (j ? "," : "") << io::format_double(design.points(i, j));
    os << '\n';
  }
  return os.str();
}

void write_design_csv(const std::filesystem::path& path, const MixtureDesign& design) {
  io::write_file_atomic(path, design_csv(design));
}

MixtureDesign read_design_csv(const std::filesystem::path& path) {
  const std::string text = io::read_file(path);
  std::istringstream is(text);
  std::string line;
  std::size_t lineno = 0;
  auto where = [&] { return path.string() + ":" + std::to_string(lineno); };
  std::vector<std::pair<std::string, Bounds>> declared;
  MixtureDesign d;
  std::vector<std::vector<double>> rows;
  bool have_header = false;
  while (std::getline(is, line)) {
    ++lineno;
    if (lineno == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
    const std::string t = io::trim(line);
    if (t.empty()) continue;
    if (t.rfind("#bounds:", 0) == 0) {
      auto f = io::split_csv_line(t.substr(8));
      Bounds b;
      if (f.size() != 3 || !io::parse_double(io::trim(f[1]), b.lower) || !io::parse_double(io::trim(f[2]), b.upper))
        throw Error(ErrorKind::ParseError, where() + ": expected '#bounds: name,lower,upper'");
      declared.emplace_back(io::trim(f[0]), b);
      continue;
    }
    if (t[0] == '#') continue;
    auto fields = io::split_csv_line(t);
    if (!have_header) {
      for (auto& f : fields) d.components.push_back(io::trim(f));
      if (d.components.size() < 2) throw Error(ErrorKind::ParseError, where() + ": need at least 2 components");
      have_header = true;
      continue;
    }
    if (fields.size() != d.components.size())
      throw Error(ErrorKind::ParseError, where() + ": expected " + std::to_string(d.components.size()) + " fields, got " +
                                             std::to_string(fields.size()));
    std::vector<double> row(fields.size());
    double sum = 0.0;
    for (std::size_t j = 0; j < fields.size(); ++j) {
      if (!io::parse_double(io::trim(fields[j]), row[j]) || !std::isfinite(row[j]))
        throw Error(ErrorKind::ParseError, where() + ": bad number '" + fields[j] + "'");
      sum += row[j];
    }
    if (std::abs(sum - 1.0) > kSumTol)
      throw Error(ErrorKind::ParseError, where() + ": row sums to " + io::format_double(sum) + ", expected 1");
    rows.push_back(std::move(row));
  }
  if (!have_header) throw Error(ErrorKind::ParseError, path.string() + ": empty design file");
  const std::size_t q = d.components.size();
  MixtureDesign out = from_rows(q, rows);
  out.components = d.components;
  for (const auto& [name, b] : declared) {
    auto it = std::find(out.components.begin(), out.components.end(), name);
    if (it == out.components.end())
      throw Error(ErrorKind::ParseError, path.string() + ": bounds for unknown component '" + name + "'");
    out.bounds[static_cast<std::size_t>(it - out.components.begin())] = b;
  }
  return out;
}

}  // namespace specrev::design
