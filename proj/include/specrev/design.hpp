#pragma once

// Scheffé simplex mixture designs: lattice and centroid generators, the
// pseudo-component transform for lower bounds, and augmentation up to the
// minimum run counts used for 2-5 component calibrations.

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "specrev/types.hpp"

namespace specrev::design {

struct Bounds {
  double lower = 0.0;
  double upper = 1.0;

  friend bool operator==(const Bounds&, const Bounds&) = default;
};

struct MixtureDesign {
  std::vector<std::string> components;
  Matrix points;  // m × q proportions, rows sum to 1
  std::vector<Bounds> bounds;

  std::size_t q() const noexcept { return components.size(); }
  std::size_t runs() const noexcept { return static_cast<std::size_t>(points.rows()); }
};

enum class DesignKind { lattice, centroid, centroid_augmented };

struct DesignSpec {
  std::size_t q = 3;
  DesignKind kind = DesignKind::centroid;
  std::size_t degree = 3;       // lattice only
  std::vector<Bounds> bounds;   // empty means (0, 1) everywhere
  std::vector<std::string> names;
};

/// All points with coordinates in {0, 1/m, …, 1}; C(q+m−1, m) rows.
MixtureDesign simplex_lattice(std::size_t q, std::size_t m);

/// Equal-part centroids of every nonempty subset; 2^q − 1 rows. q ∈ [2, 12].
MixtureDesign simplex_centroid(std::size_t q);

/// Simplex-centroid plus the q axial points midway between centroid and vertices.
MixtureDesign centroid_augmented(std::size_t q);

struct BoundedDesign {
  MixtureDesign design;
  std::vector<std::vector<double>> rejected;  // transformed rows over an upper bound
};

/// x = lower + (1 − Σlower)·z for each design point z, then drops rows above an
/// upper bound. Throws InfeasibleBounds unless Σlower < 1 < Σupper.
BoundedDesign apply_bounds(const MixtureDesign& design, std::span<const Bounds> bounds);

/// Run floor per component count: 2 → 6, 3 → 10, 4 → 18, 5 → 30.
/// Throws UnsupportedQ otherwise.
std::size_t minimum_runs(std::size_t q);

/// Adds interior points centroid + t·(vertex − centroid), t = 1/2, 1/4, 3/4,
/// 1/8, …, one vertex at a time, until the design has `floor` rows.
MixtureDesign augment_to(MixtureDesign design, std::size_t floor);

/// Base design of `spec.kind`, augmented to minimum_runs(q), then bounded.
BoundedDesign generate(const DesignSpec& spec);

std::string design_csv(const MixtureDesign& design);
void write_design_csv(const std::filesystem::path& path, const MixtureDesign& design);
/// Reads a design CSV; `#bounds:` lines restore the bounds. Rows must sum to 1.
MixtureDesign read_design_csv(const std::filesystem::path& path);

}  // namespace specrev::design
