#include "tfim2d/entanglement.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace tfim2d {

namespace {

// sigma_y x sigma_y, which is real
constexpr Mat4 kSpinFlip = {0, 0, 0, -1, 0, 0, 1, 0, 0, 1, 0, 0, -1, 0, 0, 0};

Mat4 transpose(const Mat4& a) {
  Mat4 t{};
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) t[4 * r + c] = a[4 * c + r];
  return t;
}

Mat4 mul(const Mat4& a, const Mat4& b) {
  Mat4 c{};
  for (int r = 0; r < 4; ++r)
    for (int k = 0; k < 4; ++k) {
      const double w = a[4 * r + k];
      if (w == 0.0) continue;
      for (int s = 0; s < 4; ++s) c[4 * r + s] += w * b[4 * k + s];
    }
  return c;
}

void check_density_matrix(const Mat4& rho) {
  const double tr = rho[0] + rho[5] + rho[10] + rho[15];
  if (std::abs(tr - 1.0) > 1e-8)
    throw std::invalid_argument("concurrence: trace is not 1");
  for (int r = 0; r < 4; ++r)
    for (int c = r + 1; c < 4; ++c)
      if (std::abs(rho[4 * r + c] - rho[4 * c + r]) > 1e-10)
        throw std::invalid_argument("concurrence: matrix is not symmetric");
}

ConcurrenceResult from_epsilons(std::array<double, 4> eps) {
  std::sort(eps.begin(), eps.end(), std::greater<>());
  ConcurrenceResult out;
  out.epsilons = eps;
  out.concurrence = std::max(0.0, eps[0] - eps[1] - eps[2] - eps[3]);
  out.eof = entanglement_of_formation(out.concurrence);
  return out;
}

}  // namespace

ConcurrenceResult concurrence_general(const Mat4& rho) {
  check_density_matrix(rho);

  std::vector<double> mu, v;
  jacobi_eigensymm(rho.data(), 4, mu, v);
  if (mu.front() < -1e-10)
    throw std::invalid_argument("concurrence: negative eigenvalue");

  // factor rho = L L^T with L = V diag(sqrt(mu))
  Mat4 factor{};
  for (int r = 0; r < 4; ++r)
    for (int k = 0; k < 4; ++k)
      factor[4 * r + k] = v[static_cast<std::size_t>(4 * k + r)] *
                          std::sqrt(std::max(0.0, mu[static_cast<std::size_t>(k)]));

  // The epsilons are |eig(rho * flip)|, and L^T flip L shares its nonzero
  // spectrum while staying symmetric, so they come out of one Jacobi solve
  // with absolute accuracy instead of through sqrt of squared values.
  const Mat4 sym = mul(mul(transpose(factor), kSpinFlip), factor);

  std::vector<double> nu, w;
  jacobi_eigensymm(sym.data(), 4, nu, w);
  std::array<double, 4> eps{};
  for (int k = 0; k < 4; ++k)
    eps[static_cast<std::size_t>(k)] = std::abs(nu[static_cast<std::size_t>(k)]);
  return from_epsilons(eps);
}

ConcurrenceResult concurrence_x_state(const ReducedDensityMatrix& rho) {
  if (std::abs(rho.trace() - 1.0) > 1e-8)
    throw std::invalid_argument("concurrence: trace is not 1");
  for (double d : {rho.rho11, rho.rho22, rho.rho33, rho.rho44})
    if (d < -1e-10) throw std::invalid_argument("concurrence: negative population");
  const double outer = std::sqrt(std::max(0.0, rho.rho11) * std::max(0.0, rho.rho44));
  const double inner = std::sqrt(std::max(0.0, rho.rho22) * std::max(0.0, rho.rho33));
  if (std::abs(rho.rho14) > outer + 1e-8 || std::abs(rho.rho23) > inner + 1e-8)
    throw std::invalid_argument("concurrence: off-diagonal entry breaks positivity");

  ConcurrenceResult out = from_epsilons({outer + std::abs(rho.rho14),
                                         std::max(0.0, outer - std::abs(rho.rho14)),
                                         inner + std::abs(rho.rho23),
                                         std::max(0.0, inner - std::abs(rho.rho23))});
  // closed form; equal to the epsilon combination but free of their rounding
  out.concurrence =
      2.0 * std::max({0.0, std::abs(rho.rho14) - inner, std::abs(rho.rho23) - outer});
  out.eof = entanglement_of_formation(out.concurrence);
  return out;
}

double binary_entropy(double x) {
  if (x < -1e-12 || x > 1.0 + 1e-12)
    throw std::invalid_argument("binary_entropy: argument outside [0, 1]");
  x = std::clamp(x, 0.0, 1.0);
  if (x == 0.0 || x == 1.0) return 0.0;
  return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

double entanglement_of_formation(double concurrence) {
  if (concurrence < -1e-12 || concurrence > 1.0 + 1e-12)
    throw std::invalid_argument("entanglement_of_formation: concurrence outside [0, 1]");
  const double c = std::clamp(concurrence, 0.0, 1.0);
  const double x = 0.5 * (1.0 + std::sqrt(std::max(0.0, 1.0 - c * c)));
  return binary_entropy(x);
}

}  // namespace tfim2d
