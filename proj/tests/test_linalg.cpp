#include <cmath>
#include <random>
#include <vector>

#include <doctest.h>

#include "tfim2d/linalg.hpp"

using namespace tfim2d;

TEST_CASE("dot and norm2 basics") {
  std::vector<double> x = {1.0, 2.0, 3.0};
  std::vector<double> y = {4.0, -5.0, 6.0};
  CHECK(dot(x, y) == doctest::Approx(12.0).epsilon(1e-15));
  CHECK(norm2(x) == doctest::Approx(std::sqrt(14.0)).epsilon(1e-15));
}

TEST_CASE("dot stays exact across chunk boundaries") {
  std::vector<double> ones(20000, 1.0);
  CHECK(dot(ones, ones) == 20000.0);
}

TEST_CASE("axpy accumulates in place") {
  std::vector<double> x = {1.0, 2.0};
  std::vector<double> y = {10.0, 20.0};
  axpy(-2.0, x, y);
  CHECK(y[0] == 8.0);
  CHECK(y[1] == 16.0);
}

TEST_CASE("gram computes X^T Y column-major") {
  Block x(3, 2);
  Block y(3, 2);
  // x columns (1,0,1), (2,1,0); y columns (1,1,1), (0,2,2)
  double xv[] = {1, 0, 1, 2, 1, 0};
  double yv[] = {1, 1, 1, 0, 2, 2};
  x.data.assign(xv, xv + 6);
  y.data.assign(yv, yv + 6);
  std::vector<double> g;
  gram(x, y, g);
  REQUIRE(g.size() == 4);
  CHECK(g[0] == 2.0);  // x0.y0
  CHECK(g[1] == 3.0);  // x1.y0
  CHECK(g[2] == 2.0);  // x0.y1
  CHECK(g[3] == 2.0);  // x1.y1
}

TEST_CASE("multiply_small applies a small matrix on the right") {
  Block x(2, 2);
  double xv[] = {1, 2, 3, 4};  // columns (1,2), (3,4)
  x.data.assign(xv, xv + 4);
  const double m[] = {1, 1, 2, 0};  // columns (1,1), (2,0)
  Block y;
  multiply_small(x, m, 2, y);
  REQUIRE(y.rows == 2);
  REQUIRE(y.cols == 2);
  CHECK(y.col(0)[0] == 4.0);
  CHECK(y.col(0)[1] == 6.0);
  CHECK(y.col(1)[0] == 2.0);
  CHECK(y.col(1)[1] == 4.0);
}

TEST_CASE("jacobi solves a 2x2 exactly") {
  const double a[] = {2, 1, 1, 2};
  std::vector<double> ev, v;
  jacobi_eigensymm(a, 2, ev, v);
  CHECK(ev[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(ev[1] == doctest::Approx(3.0).epsilon(1e-14));
}

TEST_CASE("jacobi returns ascending eigenvalues with orthonormal vectors") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const int n = 6;
  std::vector<double> a(n * n, 0.0);
  for (int r = 0; r < n; ++r)
    for (int c = r; c < n; ++c) a[c * n + r] = a[r * n + c] = u(rng);

  std::vector<double> ev, v;
  jacobi_eigensymm(a.data(), n, ev, v);

  for (int k = 0; k + 1 < n; ++k) CHECK(ev[k] <= ev[k + 1]);

  // residual A v_k - ev_k v_k and pairwise orthonormality
  for (int k = 0; k < n; ++k) {
    for (int r = 0; r < n; ++r) {
      double acc = 0.0;
      for (int c = 0; c < n; ++c) acc += a[r * n + c] * v[k * n + c];
      CHECK(acc == doctest::Approx(ev[k] * v[k * n + r]).epsilon(1e-12));
    }
    for (int l = 0; l < n; ++l) {
      double acc = 0.0;
      for (int r = 0; r < n; ++r) acc += v[k * n + r] * v[l * n + r];
      CHECK(acc == doctest::Approx(k == l ? 1.0 : 0.0).scale(1.0).epsilon(1e-13));
    }
  }

  // trace is preserved
  double tr_a = 0.0, tr_e = 0.0;
  for (int k = 0; k < n; ++k) {
    tr_a += a[k * n + k];
    tr_e += ev[k];
  }
  CHECK(tr_a == doctest::Approx(tr_e).epsilon(1e-13));
}
