#ifndef TFIM2D_RDM_HPP
#define TFIM2D_RDM_HPP

#include <cstdint>
#include <span>

#include "tfim2d/linalg.hpp"

namespace tfim2d {

/// Layout of the state vector with respect to one site: the vector splits
/// into periods (site bit cycles 0 then 1) made of two segments (site bit
/// constant). Site s of N (1-based, site 1 most significant) has segment
/// length 2^(N-s).
struct SegmentGeometry {
  std::uint64_t period_length = 0;
  std::uint64_t segment_length = 0;
  std::uint64_t period_count = 0;
  std::uint64_t segment_count = 0;
};

SegmentGeometry segment_geometry(int site, int n_sites);

/// Two-site reduced density matrix of a real state vector. For a real
/// Hamiltonian eigenstate only six entries can be nonzero; in the basis
/// (uu, ud, du, dd -> 1..4 with the first site's bit leading) they are the
/// four diagonal entries plus rho14 and rho23.
struct ReducedDensityMatrix {
  int site_i = 0;
  int site_j = 0;
  double rho11 = 0.0;
  double rho22 = 0.0;
  double rho33 = 0.0;
  double rho44 = 0.0;
  double rho14 = 0.0;
  double rho23 = 0.0;

  double trace() const { return rho11 + rho22 + rho33 + rho44; }
};

/// Compute the two-site RDM by one strided pass over the state vector,
/// visiting each (0,0) basis run and its three partner offsets. Accepts the
/// site pair in either order; psi must be normalized and of power-of-two
/// length.
ReducedDensityMatrix reduced_density_matrix(std::span<const double> psi, int site_i, int site_j);

Mat4 to_matrix(const ReducedDensityMatrix& rho);

}  // namespace tfim2d

#endif
