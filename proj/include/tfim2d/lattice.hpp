#ifndef TFIM2D_LATTICE_HPP
#define TFIM2D_LATTICE_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace tfim2d {

/// Axial coordinate (q, r) on the triangular lattice.
struct SiteCoord {
  int q = 0;
  int r = 0;
  bool operator==(const SiteCoord&) const = default;
};

/// Undirected bond between 1-based sites, i < j.
struct Bond {
  int i = 0;
  int j = 0;
  double coupling = 0.0;
};

/// Bond-strength defect: every bond touching `site` is scaled to (1+alpha)*J.
struct Impurity {
  int site = 0;
  double alpha = 0.0;
};

struct Lattice {
  int n_sites = 0;
  std::vector<SiteCoord> sites;  // index = site number - 1
  std::vector<Bond> bonds;       // sorted by (i, j), i < j, no duplicates
  int center = 0;                // 1-based site at the origin, 0 if absent
  int impurity_site = 0;         // 1-based, 0 for a clean lattice
  double alpha = 0.0;
  double j_base = 0.0;
};

/// Hexagonal patch of the triangular lattice with the given shell radius:
/// all (q, r) with |q| <= R, |r| <= R, |q+r| <= R. Sites are numbered
/// row-major: rows ordered by ascending r, ascending q within a row, 1-based.
/// R=1 gives the 7-site patch (center 4), R=2 the 19-site patch (center 10).
Lattice build_patch(int shell_radius, double j, std::optional<Impurity> impurity = {});

/// Lattice over an explicit coordinate set. Bonds connect coordinate pairs at
/// triangular nearest-neighbor displacement; numbering follows the same
/// row-major rule as build_patch.
Lattice build_from_coords(std::vector<SiteCoord> coords, double j,
                          std::optional<Impurity> impurity = {});

/// All bonded (i, j) pairs, i < j, sorted.
std::vector<std::pair<int, int>> nearest_pairs(const Lattice& lat);

int site_degree(const Lattice& lat, int site);

/// Human-readable description: counts, coordinates, one "i,j,coupling" line
/// per bond.
std::string lattice_summary(const Lattice& lat);

}  // namespace tfim2d

#endif
