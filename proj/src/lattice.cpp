#include "tfim2d/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

namespace tfim2d {

namespace {

// the six nearest-neighbor displacements in axial coordinates
constexpr SiteCoord kNeighbors[6] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, -1}, {-1, 1}};

bool row_major_less(const SiteCoord& a, const SiteCoord& b) {
  if (a.r != b.r) return a.r < b.r;
  return a.q < b.q;
}

Lattice assemble(std::vector<SiteCoord> coords, double j, const std::optional<Impurity>& impurity) {
  if (coords.empty()) throw std::invalid_argument("lattice: no sites");
  std::sort(coords.begin(), coords.end(), row_major_less);
  for (std::size_t k = 1; k < coords.size(); ++k)
    if (coords[k] == coords[k - 1]) throw std::invalid_argument("lattice: duplicate coordinate");

  Lattice lat;
  lat.n_sites = static_cast<int>(coords.size());
  lat.sites = std::move(coords);
  lat.j_base = j;

  std::map<std::pair<int, int>, int> index;  // (r, q) -> 1-based site
  for (int s = 0; s < lat.n_sites; ++s)
    index[{lat.sites[static_cast<std::size_t>(s)].r, lat.sites[static_cast<std::size_t>(s)].q}] =
        s + 1;

  auto origin = index.find({0, 0});
  lat.center = (origin == index.end()) ? 0 : origin->second;

  if (impurity) {
    if (impurity->site < 1 || impurity->site > lat.n_sites)
      throw std::invalid_argument("lattice: impurity site out of range");
    if (impurity->alpha < -1.0)
      throw std::invalid_argument("lattice: impurity alpha below -1 flips the bond sign");
    lat.impurity_site = impurity->site;
    lat.alpha = impurity->alpha;
  }

  for (int s = 1; s <= lat.n_sites; ++s) {
    const SiteCoord& c = lat.sites[static_cast<std::size_t>(s - 1)];
    for (const SiteCoord& d : kNeighbors) {
      auto it = index.find({c.r + d.r, c.q + d.q});
      if (it == index.end() || it->second <= s) continue;
      double coupling = j;
      if (lat.impurity_site != 0 && (s == lat.impurity_site || it->second == lat.impurity_site))
        coupling = (1.0 + lat.alpha) * j;
      lat.bonds.push_back({s, it->second, coupling});
    }
  }
  std::sort(lat.bonds.begin(), lat.bonds.end(),
            [](const Bond& a, const Bond& b) { return std::pair{a.i, a.j} < std::pair{b.i, b.j}; });
  return lat;
}

}  // namespace

Lattice build_patch(int shell_radius, double j, std::optional<Impurity> impurity) {
  if (shell_radius < 0) throw std::invalid_argument("build_patch: negative shell radius");
  std::vector<SiteCoord> coords;
  for (int r = -shell_radius; r <= shell_radius; ++r)
    for (int q = -shell_radius; q <= shell_radius; ++q)
      if (std::abs(q + r) <= shell_radius) coords.push_back({q, r});
  return assemble(std::move(coords), j, impurity);
}

Lattice build_from_coords(std::vector<SiteCoord> coords, double j,
                          std::optional<Impurity> impurity) {
  return assemble(std::move(coords), j, impurity);
}

std::vector<std::pair<int, int>> nearest_pairs(const Lattice& lat) {
  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(lat.bonds.size());
  for (const Bond& b : lat.bonds) pairs.emplace_back(b.i, b.j);
  return pairs;
}

int site_degree(const Lattice& lat, int site) {
  if (site < 1 || site > lat.n_sites) throw std::invalid_argument("site_degree: site out of range");
  int deg = 0;
  for (const Bond& b : lat.bonds) deg += (b.i == site) + (b.j == site);
  return deg;
}

std::string lattice_summary(const Lattice& lat) {
  std::ostringstream out;
  out << "sites: " << lat.n_sites << "\n";
  out << "bonds: " << lat.bonds.size() << "\n";
  out << "center: " << lat.center << "\n";
  if (lat.impurity_site != 0)
    out << "impurity: site " << lat.impurity_site << " alpha " << lat.alpha << "\n";
  for (int s = 1; s <= lat.n_sites; ++s) {
    const SiteCoord& c = lat.sites[static_cast<std::size_t>(s - 1)];
    out << "site " << s << ": q=" << c.q << " r=" << c.r << "\n";
  }
  for (const Bond& b : lat.bonds) out << b.i << "," << b.j << "," << b.coupling << "\n";
  return out.str();
}

}  // namespace tfim2d
