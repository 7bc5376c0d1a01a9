#ifndef TFIM2D_LINALG_HPP
#define TFIM2D_LINALG_HPP

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace tfim2d {

/// Dense column-major block of vectors (n rows, p columns).
struct Block {
  std::size_t rows = 0;
  int cols = 0;
  std::vector<double> data;

  Block() = default;
  Block(std::size_t n, int p) : rows(n), cols(p), data(n * static_cast<std::size_t>(p), 0.0) {}

  double* col(int j) { return data.data() + rows * static_cast<std::size_t>(j); }
  const double* col(int j) const { return data.data() + rows * static_cast<std::size_t>(j); }
  std::span<double> col_span(int j) { return {col(j), rows}; }
  std::span<const double> col_span(int j) const { return {col(j), rows}; }
};

/// 4x4 matrix, row-major. Entry (r,c) at index 4*r+c.
using Mat4 = std::array<double, 16>;

/// Dot product with chunked two-level accumulation. The summation order is
/// fixed, so results are reproducible and the rounding error stays near
/// sqrt(n)*eps instead of n*eps.
double dot(std::span<const double> x, std::span<const double> y);

double norm2(std::span<const double> x);

/// y += a*x
void axpy(double a, std::span<const double> x, std::span<double> y);

/// G = X^T Y (cols_x by cols_y, column-major in g)
void gram(const Block& x, const Block& y, std::vector<double>& g);

/// Y = X * M where M is cols_x by cols_out, column-major.
void multiply_small(const Block& x, const double* m, int cols_out, Block& y);

/// Eigendecomposition of a small dense symmetric matrix by cyclic Jacobi
/// rotations. `a` is n x n column-major (symmetric, only read), eigenvalues
/// come out ascending, eigenvectors column-major with column k matching
/// eigenvalue k.
void jacobi_eigensymm(const double* a, int n, std::vector<double>& eigenvalues,
                      std::vector<double>& eigenvectors);

}  // namespace tfim2d

#endif
