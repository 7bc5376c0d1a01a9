#include "tfim2d/dense_oracle.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace tfim2d {

namespace {

DenseMatrix kron(const DenseMatrix& a, const DenseMatrix& b) {
  DenseMatrix c(a.dim * b.dim);
  for (std::size_t ra = 0; ra < a.dim; ++ra)
    for (std::size_t ca = 0; ca < a.dim; ++ca) {
      const double w = a.at(ra, ca);
      if (w == 0.0) continue;
      for (std::size_t rb = 0; rb < b.dim; ++rb)
        for (std::size_t cb = 0; cb < b.dim; ++cb)
          c.at(ra * b.dim + rb, ca * b.dim + cb) = w * b.at(rb, cb);
    }
  return c;
}

DenseMatrix pauli(char which) {
  DenseMatrix m(2);
  switch (which) {
    case 'i':
      m.at(0, 0) = 1.0;
      m.at(1, 1) = 1.0;
      break;
    case 'x':
      m.at(0, 1) = 1.0;
      m.at(1, 0) = 1.0;
      break;
    case 'z':
      m.at(0, 0) = 1.0;
      m.at(1, 1) = -1.0;
      break;
    default:
      throw std::logic_error("pauli: unknown factor");
  }
  return m;
}

/// Product over sites of one-site factors, site 1 first (most significant).
DenseMatrix site_product(int n_sites, const std::vector<std::pair<int, char>>& nontrivial) {
  DenseMatrix m(1);
  m.at(0, 0) = 1.0;
  for (int s = 1; s <= n_sites; ++s) {
    char which = 'i';
    for (const auto& [site, factor] : nontrivial)
      if (site == s) which = factor;
    m = kron(m, pauli(which));
  }
  return m;
}

constexpr double kSymTol = 1e-12;

// Householder reduction of a symmetric matrix to tridiagonal form. On exit
// `a` holds the accumulated orthogonal transform (column-accessible via
// row-major a[r*n+c]), d the diagonal, e the subdiagonal in e[1..n-1].
void householder_tridiag(std::vector<double>& a, std::size_t n, std::vector<double>& d,
                         std::vector<double>& e) {
  auto at = [&](std::size_t r, std::size_t c) -> double& { return a[r * n + c]; };
  for (std::size_t i = n - 1; i >= 1; --i) {
    const std::size_t l = i - 1;
    double h = 0.0;
    double scale = 0.0;
    if (l > 0) {
      for (std::size_t k = 0; k <= l; ++k) scale += std::abs(at(i, k));
      if (scale == 0.0) {
        e[i] = at(i, l);
      } else {
        for (std::size_t k = 0; k <= l; ++k) {
          at(i, k) /= scale;
          h += at(i, k) * at(i, k);
        }
        double f = at(i, l);
        double g = (f >= 0.0) ? -std::sqrt(h) : std::sqrt(h);
        e[i] = scale * g;
        h -= f * g;
        at(i, l) = f - g;
        f = 0.0;
        for (std::size_t j = 0; j <= l; ++j) {
          at(j, i) = at(i, j) / h;
          g = 0.0;
          for (std::size_t k = 0; k <= j; ++k) g += at(j, k) * at(i, k);
          for (std::size_t k = j + 1; k <= l; ++k) g += at(k, j) * at(i, k);
          e[j] = g / h;
          f += e[j] * at(i, j);
        }
        const double hh = f / (h + h);
        for (std::size_t j = 0; j <= l; ++j) {
          f = at(i, j);
          e[j] = g = e[j] - hh * f;
          for (std::size_t k = 0; k <= j; ++k) at(j, k) -= f * e[k] + g * at(i, k);
        }
      }
    } else {
      e[i] = at(i, l);
    }
    d[i] = h;
  }
  d[0] = 0.0;
  e[0] = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (d[i] != 0.0) {
      for (std::size_t j = 0; j < i; ++j) {
        double g = 0.0;
        for (std::size_t k = 0; k < i; ++k) g += at(i, k) * at(k, j);
        for (std::size_t k = 0; k < i; ++k) at(k, j) -= g * at(k, i);
      }
    }
    d[i] = at(i, i);
    at(i, i) = 1.0;
    for (std::size_t j = 0; j < i; ++j) at(j, i) = at(i, j) = 0.0;
  }
}

// Implicit-shift QL sweep on the tridiagonal (d, e), rotations accumulated
// into z so its columns become eigenvectors.
void ql_implicit(std::vector<double>& d, std::vector<double>& e, std::vector<double>& z,
                 std::size_t n) {
  auto zat = [&](std::size_t r, std::size_t c) -> double& { return z[r * n + c]; };
  for (std::size_t i = 1; i < n; ++i) e[i - 1] = e[i];
  e[n - 1] = 0.0;
  for (std::size_t l = 0; l < n; ++l) {
    int iter = 0;
    std::size_t m;
    do {
      for (m = l; m + 1 < n; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= 1e-16 * dd) break;
      }
      if (m != l) {
        if (iter++ == 60) throw std::runtime_error("dense_eigensolve: QL failed to converge");
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0;
        double c = 1.0;
        double p = 0.0;
        bool underflow = false;
        for (std::size_t i = m; i-- > l;) {
          double f = s * e[i];
          const double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            underflow = true;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
          for (std::size_t k = 0; k < n; ++k) {
            f = zat(k, i + 1);
            zat(k, i + 1) = s * zat(k, i) + c * f;
            zat(k, i) = c * zat(k, i) - s * f;
          }
        }
        if (underflow) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
}

}  // namespace

DenseMatrix dense_hamiltonian(const Lattice& lat, double h) {
  if (lat.n_sites < 1) throw std::invalid_argument("dense_hamiltonian: empty lattice");
  if (lat.n_sites > 14) throw std::invalid_argument("dense_hamiltonian: more than 14 sites");
  const std::size_t dim = std::size_t{1} << lat.n_sites;
  DenseMatrix ham(dim);
  for (const Bond& b : lat.bonds) {
    const DenseMatrix term = site_product(lat.n_sites, {{b.i, 'x'}, {b.j, 'x'}});
    for (std::size_t k = 0; k < ham.a.size(); ++k) ham.a[k] -= b.coupling * term.a[k];
  }
  for (int s = 1; s <= lat.n_sites; ++s) {
    const DenseMatrix term = site_product(lat.n_sites, {{s, 'z'}});
    for (std::size_t k = 0; k < ham.a.size(); ++k) ham.a[k] -= h * term.a[k];
  }
  return ham;
}

DenseMatrix dense_bond_matrix(int site_a, int site_b, int n_sites) {
  if (n_sites < 2 || n_sites > 14) throw std::invalid_argument("dense_bond_matrix: bad size");
  if (site_a < 1 || site_a > n_sites || site_b < 1 || site_b > n_sites || site_a == site_b)
    throw std::invalid_argument("dense_bond_matrix: bad site pair");
  return site_product(n_sites, {{site_a, 'x'}, {site_b, 'x'}});
}

DenseEig dense_eigensolve(const DenseMatrix& m) {
  const std::size_t n = m.dim;
  if (n == 0) throw std::invalid_argument("dense_eigensolve: empty matrix");
  double scale = 0.0;
  for (double v : m.a) scale = std::max(scale, std::abs(v));
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = r + 1; c < n; ++c)
      if (std::abs(m.at(r, c) - m.at(c, r)) > kSymTol * std::max(1.0, scale))
        throw std::invalid_argument("dense_eigensolve: matrix is not symmetric");

  DenseEig out;
  out.eigenvalues.assign(n, 0.0);
  std::vector<double> e(n, 0.0);
  std::vector<double> work = m.a;
  if (n == 1) {
    out.eigenvalues[0] = m.a[0];
    out.eigenvectors = DenseMatrix(1);
    out.eigenvectors.a[0] = 1.0;
    return out;
  }
  householder_tridiag(work, n, out.eigenvalues, e);
  ql_implicit(out.eigenvalues, e, work, n);

  // sort ascending, carrying eigenvector columns along
  out.eigenvectors = DenseMatrix(n);
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return out.eigenvalues[a] < out.eigenvalues[b];
  });
  std::vector<double> sorted(n);
  for (std::size_t i = 0; i < n; ++i) sorted[i] = out.eigenvalues[order[i]];
  out.eigenvalues = std::move(sorted);
  for (std::size_t c = 0; c < n; ++c)
    for (std::size_t r = 0; r < n; ++r) out.eigenvectors.at(r, c) = work[r * n + order[c]];
  return out;
}

DenseMatrix dense_partial_trace(std::span<const double> psi, int i, int j, int n_sites) {
  if (n_sites < 2 || n_sites > 26) throw std::invalid_argument("dense_partial_trace: bad size");
  const std::size_t dim = std::size_t{1} << n_sites;
  if (psi.size() != dim) throw std::invalid_argument("dense_partial_trace: state length");
  if (i < 1 || i > n_sites || j < 1 || j > n_sites || i == j)
    throw std::invalid_argument("dense_partial_trace: bad site pair");

  const std::uint64_t bit_i = std::uint64_t{1} << (n_sites - i);
  const std::uint64_t bit_j = std::uint64_t{1} << (n_sites - j);
  const std::uint64_t env_mask = (dim - 1) & ~(bit_i | bit_j);

  DenseMatrix rho(4);
  for (std::uint64_t k = 0; k < dim; ++k) {
    const std::size_t row = 2 * ((k & bit_i) != 0) + ((k & bit_j) != 0);
    for (std::uint64_t k2 = 0; k2 < dim; ++k2) {
      if ((k & env_mask) != (k2 & env_mask)) continue;
      const std::size_t col = 2 * ((k2 & bit_i) != 0) + ((k2 & bit_j) != 0);
      rho.at(row, col) += psi[k] * psi[k2];
    }
  }
  return rho;
}

DenseOperator::DenseOperator(DenseMatrix m) : m_(std::move(m)) {
  double lo = 0.0;
  for (std::size_t r = 0; r < m_.dim; ++r) {
    double radius = 0.0;
    for (std::size_t c = 0; c < m_.dim; ++c)
      if (c != r) radius += std::abs(m_.at(r, c));
    const double bound = m_.at(r, r) - radius;
    if (r == 0 || bound < lo) lo = bound;
  }
  lower_ = lo;
}

void DenseOperator::apply_vec(std::span<const double> in, std::span<double> out) const {
  if (in.size() != m_.dim || out.size() != m_.dim)
    throw std::invalid_argument("DenseOperator: dimension mismatch");
  for (std::size_t r = 0; r < m_.dim; ++r) {
    out[r] = dot({&m_.a[r * m_.dim], m_.dim}, in);
  }
}

}  // namespace tfim2d
