#ifndef TFIM2D_HAMILTONIAN_OP_HPP
#define TFIM2D_HAMILTONIAN_OP_HPP

#include <cstdint>
#include <vector>

#include "tfim2d/lattice.hpp"
#include "tfim2d/linear_operator.hpp"

namespace tfim2d {

/// One spin-exchange bond as a basis-index involution: state k couples to
/// k XOR mask with the given strength.
struct BondMask {
  std::uint64_t mask = 0;
  double coupling = 0.0;
};

/// Matrix-free transverse-field Ising Hamiltonian
///   H = -sum_bonds J_ij X_i X_j - h sum_i Z_i
/// on basis states indexed 0..2^N-1, where site s (1-based) sits at bit
/// position N-s (site 1 is the most significant bit) and bit 0 means spin up.
class HamiltonianOperator final : public SymOperator {
 public:
  int n_sites = 0;
  double field = 0.0;
  std::vector<double> diag;        // field part, diag[k] = -h*(N - 2*popcount(k))
  std::vector<BondMask> bonds;

  std::size_t dimension() const override { return diag.size(); }
  void apply_vec(std::span<const double> in, std::span<double> out) const override;
  double spectrum_lower_bound() const override;
};

/// Assemble the operator for a lattice at transverse field h. Guarded to
/// N <= 26 so the diagonal table stays within memory.
HamiltonianOperator build_operator(const Lattice& lat, double h);

/// Placement of the diagonal strings a single X_i X_j exchange term writes
/// into the dense matrix: reading down the first column, its entry sits at
/// 1-based row 1 + 2^i + 2^j; every diagonal run below the main diagonal is
/// 2^j entries long; and there are 2^(N-j-1) such runs. Here i > j are bit
/// positions (0-based from the least significant bit).
struct ColumnStringStructure {
  std::uint64_t first_row = 0;
  std::uint64_t run_length = 0;
  std::uint64_t run_count = 0;
};

ColumnStringStructure column_string_structure(int i, int j, int n_sites);

}  // namespace tfim2d

#endif
