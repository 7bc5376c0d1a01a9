#include "tfim2d/rdm.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace tfim2d {

SegmentGeometry segment_geometry(int site, int n_sites) {
  if (n_sites < 1 || n_sites > 63) throw std::invalid_argument("segment_geometry: bad site count");
  if (site < 1 || site > n_sites) throw std::invalid_argument("segment_geometry: site out of range");
  SegmentGeometry g;
  g.segment_length = std::uint64_t{1} << (n_sites - site);
  g.period_length = g.segment_length << 1;
  g.period_count = std::uint64_t{1} << (site - 1);
  g.segment_count = g.period_count << 1;
  return g;
}

ReducedDensityMatrix reduced_density_matrix(std::span<const double> psi, int site_i, int site_j) {
  if (!std::has_single_bit(psi.size()) || psi.size() < 4)
    throw std::invalid_argument("reduced_density_matrix: state length must be 2^N, N >= 2");
  const int n_sites = std::countr_zero(psi.size());
  if (site_i < 1 || site_i > n_sites || site_j < 1 || site_j > n_sites)
    throw std::invalid_argument("reduced_density_matrix: site out of range");
  if (site_i == site_j) throw std::invalid_argument("reduced_density_matrix: equal sites");

  const int lo = std::min(site_i, site_j);
  const int hi = std::max(site_i, site_j);
  const std::uint64_t seg_lo = std::uint64_t{1} << (n_sites - lo);
  const std::uint64_t seg_hi = std::uint64_t{1} << (n_sites - hi);
  const std::uint64_t dim = psi.size();

  // Walk the (0,0) runs: periods of the earlier site, then sub-periods of the
  // later site inside the first segment, then the contiguous run itself. The
  // three partners of psi[q] sit at fixed strides.
  double d00 = 0.0, d01 = 0.0, d10 = 0.0, d11 = 0.0, x_outer = 0.0, x_inner = 0.0;
  for (std::uint64_t base_lo = 0; base_lo < dim; base_lo += 2 * seg_lo) {
    for (std::uint64_t base = base_lo; base < base_lo + seg_lo; base += 2 * seg_hi) {
      for (std::uint64_t q = base; q < base + seg_hi; ++q) {
        const double a00 = psi[q];
        const double a01 = psi[q + seg_hi];
        const double a10 = psi[q + seg_lo];
        const double a11 = psi[q + seg_lo + seg_hi];
        d00 += a00 * a00;
        d01 += a01 * a01;
        d10 += a10 * a10;
        d11 += a11 * a11;
        x_outer += a00 * a11;
        x_inner += a01 * a10;
      }
    }
  }

  const double norm = d00 + d01 + d10 + d11;
  if (std::abs(norm - 1.0) > 1e-10)
    throw std::invalid_argument("reduced_density_matrix: state is not normalized");

  ReducedDensityMatrix rho;
  rho.site_i = site_i;
  rho.site_j = site_j;
  rho.rho11 = d00;
  rho.rho44 = d11;
  rho.rho14 = x_outer;
  rho.rho23 = x_inner;
  if (site_i == lo) {
    rho.rho22 = d01;
    rho.rho33 = d10;
  } else {
    // requested order swaps the two middle basis states
    rho.rho22 = d10;
    rho.rho33 = d01;
  }
  return rho;
}

Mat4 to_matrix(const ReducedDensityMatrix& rho) {
  Mat4 m{};
  m[0] = rho.rho11;
  m[5] = rho.rho22;
  m[10] = rho.rho33;
  m[15] = rho.rho44;
  m[3] = rho.rho14;
  m[12] = rho.rho14;
  m[6] = rho.rho23;
  m[9] = rho.rho23;
  return m;
}

}  // namespace tfim2d
