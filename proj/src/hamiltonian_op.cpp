#include "tfim2d/hamiltonian_op.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace tfim2d {

void HamiltonianOperator::apply_vec(std::span<const double> in, std::span<double> out) const {
  const std::size_t dim = diag.size();
  if (in.size() != dim || out.size() != dim)
    throw std::invalid_argument("apply_vec: dimension mismatch");
  for (std::size_t k = 0; k < dim; ++k) out[k] = diag[k] * in[k];
  for (const BondMask& b : bonds) {
    const std::uint64_t mask = b.mask;
    const double c = b.coupling;
    for (std::size_t k = 0; k < dim; ++k) out[k] -= c * in[k ^ mask];
  }
}

double HamiltonianOperator::spectrum_lower_bound() const {
  // Each bond contributes exactly one off-diagonal entry to every row, so the
  // Gershgorin radius is the same for all rows; the smallest diagonal value is
  // -|h|*N.
  double radius = 0.0;
  for (const BondMask& b : bonds) radius += std::abs(b.coupling);
  return -std::abs(field) * n_sites - radius;
}

HamiltonianOperator build_operator(const Lattice& lat, double h) {
  if (lat.n_sites < 1) throw std::invalid_argument("build_operator: empty lattice");
  if (lat.n_sites > 26) throw std::invalid_argument("build_operator: more than 26 sites");
  if (!std::isfinite(h)) throw std::invalid_argument("build_operator: non-finite field");

  HamiltonianOperator op;
  op.n_sites = lat.n_sites;
  op.field = h;
  const std::size_t dim = std::size_t{1} << lat.n_sites;
  op.diag.resize(dim);
  for (std::size_t k = 0; k < dim; ++k)
    op.diag[k] = -h * (lat.n_sites - 2 * std::popcount(k));
  op.bonds.reserve(lat.bonds.size());
  for (const Bond& b : lat.bonds) {
    const std::uint64_t mask = (std::uint64_t{1} << (lat.n_sites - b.i)) |
                               (std::uint64_t{1} << (lat.n_sites - b.j));
    op.bonds.push_back({mask, b.coupling});
  }
  return op;
}

ColumnStringStructure column_string_structure(int i, int j, int n_sites) {
  if (i == j) throw std::invalid_argument("column_string_structure: equal bit positions");
  if (j < 0 || i <= j || i > n_sites - 1)
    throw std::invalid_argument("column_string_structure: need 0 <= j < i <= N-1");
  ColumnStringStructure s;
  s.first_row = 1 + (std::uint64_t{1} << i) + (std::uint64_t{1} << j);
  s.run_length = std::uint64_t{1} << j;
  s.run_count = std::uint64_t{1} << (n_sites - 1 - j);
  return s;
}

}  // namespace tfim2d
