#include "tfim2d/linalg.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace tfim2d {

namespace {
constexpr std::size_t kChunk = 4096;
}

double dot(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("dot: length mismatch");
  const std::size_t n = x.size();
  double total = 0.0;
  for (std::size_t base = 0; base < n; base += kChunk) {
    const std::size_t end = std::min(n, base + kChunk);
    double partial = 0.0;
    for (std::size_t k = base; k < end; ++k) partial += x[k] * y[k];
    total += partial;
  }
  return total;
}

double norm2(std::span<const double> x) { return std::sqrt(dot(x, x)); }

void axpy(double a, std::span<const double> x, std::span<double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("axpy: length mismatch");
  for (std::size_t k = 0; k < x.size(); ++k) y[k] += a * x[k];
}

void gram(const Block& x, const Block& y, std::vector<double>& g) {
  if (x.rows != y.rows) throw std::invalid_argument("gram: row mismatch");
  g.assign(static_cast<std::size_t>(x.cols) * y.cols, 0.0);
  for (int j = 0; j < y.cols; ++j)
    for (int i = 0; i < x.cols; ++i)
      g[static_cast<std::size_t>(j) * x.cols + i] = dot(x.col_span(i), y.col_span(j));
}

void multiply_small(const Block& x, const double* m, int cols_out, Block& y) {
  y.rows = x.rows;
  y.cols = cols_out;
  y.data.assign(x.rows * static_cast<std::size_t>(cols_out), 0.0);
  for (int jo = 0; jo < cols_out; ++jo) {
    double* out = y.col(jo);
    for (int ji = 0; ji < x.cols; ++ji) {
      const double w = m[static_cast<std::size_t>(jo) * x.cols + ji];
      if (w == 0.0) continue;
      const double* in = x.col(ji);
      for (std::size_t r = 0; r < x.rows; ++r) out[r] += w * in[r];
    }
  }
}

void jacobi_eigensymm(const double* a, int n, std::vector<double>& eigenvalues,
                      std::vector<double>& eigenvectors) {
  if (n <= 0) throw std::invalid_argument("jacobi_eigensymm: empty matrix");
  const std::size_t nn = static_cast<std::size_t>(n);
  std::vector<double> m(a, a + nn * nn);
  eigenvectors.assign(nn * nn, 0.0);
  for (int i = 0; i < n; ++i) eigenvectors[static_cast<std::size_t>(i) * nn + i] = 1.0;

  auto at = [&](int r, int c) -> double& { return m[static_cast<std::size_t>(c) * nn + r]; };
  auto vat = [&](int r, int c) -> double& {
    return eigenvectors[static_cast<std::size_t>(c) * nn + r];
  };

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += at(p, q) * at(p, q);
    if (off < 1e-300) break;
    double scale = 0.0;
    for (int p = 0; p < n; ++p) scale = std::max(scale, std::abs(at(p, p)));
    if (std::sqrt(off) <= 1e-15 * std::max(scale, 1.0) && sweep > 0) break;

    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = at(p, q);
        if (apq == 0.0) continue;
        const double app = at(p, p);
        const double aqq = at(q, q);
        const double tau = (aqq - app) / (2.0 * apq);
        const double t = (tau >= 0.0) ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                      : 1.0 / (tau - std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {
          const double mkp = at(k, p);
          const double mkq = at(k, q);
          at(k, p) = c * mkp - s * mkq;
          at(k, q) = s * mkp + c * mkq;
        }
        for (int k = 0; k < n; ++k) {
          const double mpk = at(p, k);
          const double mqk = at(q, k);
          at(p, k) = c * mpk - s * mqk;
          at(q, k) = s * mpk + c * mqk;
        }
        for (int k = 0; k < n; ++k) {
          const double vkp = vat(k, p);
          const double vkq = vat(k, q);
          vat(k, p) = c * vkp - s * vkq;
          vat(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  eigenvalues.resize(nn);
  for (int i = 0; i < n; ++i) eigenvalues[static_cast<std::size_t>(i)] = at(i, i);

  // sort ascending, permuting eigenvector columns alongside
  for (int i = 0; i < n; ++i) {
    int lo = i;
    for (int k = i + 1; k < n; ++k)
      if (eigenvalues[static_cast<std::size_t>(k)] < eigenvalues[static_cast<std::size_t>(lo)])
        lo = k;
    if (lo != i) {
      std::swap(eigenvalues[static_cast<std::size_t>(i)], eigenvalues[static_cast<std::size_t>(lo)]);
      for (int r = 0; r < n; ++r) std::swap(vat(r, i), vat(r, lo));
    }
  }
}

}  // namespace tfim2d
