#ifndef TFIM2D_DENSE_ORACLE_HPP
#define TFIM2D_DENSE_ORACLE_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "tfim2d/lattice.hpp"
#include "tfim2d/linalg.hpp"
#include "tfim2d/linear_operator.hpp"

namespace tfim2d {

/// Plain dense square matrix, row-major.
struct DenseMatrix {
  std::size_t dim = 0;
  std::vector<double> a;

  DenseMatrix() = default;
  explicit DenseMatrix(std::size_t n) : dim(n), a(n * n, 0.0) {}
  double& at(std::size_t r, std::size_t c) { return a[r * dim + c]; }
  double at(std::size_t r, std::size_t c) const { return a[r * dim + c]; }
};

/// Reference Hamiltonian assembled literally from Kronecker products of
/// one-site Pauli factors. Independent of the bit-mask application path, so
/// the two can check each other. Guarded to N <= 14.
DenseMatrix dense_hamiltonian(const Lattice& lat, double h);

/// Dense matrix of a single X_a X_b exchange term (unit coupling), assembled
/// through the same Kronecker route as dense_hamiltonian.
DenseMatrix dense_bond_matrix(int site_a, int site_b, int n_sites);

struct DenseEig {
  std::vector<double> eigenvalues;  // ascending
  DenseMatrix eigenvectors;         // column k pairs with eigenvalue k
};

/// Full symmetric eigendecomposition: Householder reduction to tridiagonal
/// form followed by implicit-shift QL. Rejects non-symmetric input.
DenseEig dense_eigensolve(const DenseMatrix& m);

/// Definitional two-site reduced density matrix: rho[ab,cd] =
/// sum_env psi[a b env] psi[c d env], taking sites i and j (1-based) in that
/// order and summing over every configuration of the remaining sites.
DenseMatrix dense_partial_trace(std::span<const double> psi, int i, int j, int n_sites);

/// Dense-matrix adapter so reference matrices can drive operator-only code.
class DenseOperator final : public SymOperator {
 public:
  explicit DenseOperator(DenseMatrix m);
  std::size_t dimension() const override { return m_.dim; }
  void apply_vec(std::span<const double> in, std::span<double> out) const override;
  double spectrum_lower_bound() const override { return lower_; }
  const DenseMatrix& matrix() const { return m_; }

 private:
  DenseMatrix m_;
  double lower_ = 0.0;
};

}  // namespace tfim2d

#endif
