#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include <doctest.h>

#include "tfim2d/dense_oracle.hpp"
#include "tfim2d/hamiltonian_op.hpp"
#include "tfim2d/lattice.hpp"

using namespace tfim2d;

namespace {

Lattice chain(int n) {
  std::vector<SiteCoord> coords;
  for (int k = 0; k < n; ++k) coords.push_back({k, 0});
  return build_from_coords(std::move(coords), 1.0);
}

std::vector<double> random_state(std::size_t dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> v(dim);
  for (double& x : v) x = u(rng);
  return v;
}

}  // namespace

TEST_CASE("field diagonal counts set bits") {
  const HamiltonianOperator op = build_operator(chain(3), 2.0);
  const std::vector<double> expected = {-6, -2, -2, 2, -2, 2, 2, 6};
  REQUIRE(op.diag.size() == 8);
  for (std::size_t k = 0; k < 8; ++k) CHECK(op.diag[k] == expected[k]);
}

TEST_CASE("two-site operator matches the known matrix") {
  const HamiltonianOperator op = build_operator(chain(2), 1.0);
  REQUIRE(op.dimension() == 4);

  const double expected[4][4] = {{-2, 0, 0, -1}, {0, 0, -1, 0}, {0, -1, 0, 0}, {-1, 0, 0, 2}};
  std::vector<double> in(4, 0.0), out(4);
  for (int c = 0; c < 4; ++c) {
    in.assign(4, 0.0);
    in[static_cast<std::size_t>(c)] = 1.0;
    op.apply_vec(in, out);
    for (int r = 0; r < 4; ++r) CHECK(out[static_cast<std::size_t>(r)] == expected[r][c]);
  }

  // spectrum is {-sqrt(5), -1, 1, sqrt(5)}
  DenseMatrix m(4);
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) m.at(static_cast<std::size_t>(r), static_cast<std::size_t>(c)) = expected[r][c];
  const DenseEig eig = dense_eigensolve(m);
  const double s5 = std::sqrt(5.0);
  CHECK(eig.eigenvalues[0] == doctest::Approx(-s5).epsilon(1e-14));
  CHECK(eig.eigenvalues[1] == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(eig.eigenvalues[2] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(eig.eigenvalues[3] == doctest::Approx(s5).epsilon(1e-14));
}

TEST_CASE("bond masks address site bits from the top") {
  const HamiltonianOperator op = build_operator(build_patch(1, 1.0), 0.7);
  // site s occupies bit N-s; bond (1,2) of N=7 flips bits 6 and 5
  bool found = false;
  for (const BondMask& b : op.bonds)
    if (b.mask == ((1ull << 6) | (1ull << 5))) found = true;
  CHECK(found);
  CHECK(op.bonds.size() == 12);
}

TEST_CASE("apply is symmetric") {
  const HamiltonianOperator op = build_operator(build_patch(1, 1.0, Impurity{4, 0.8}), 1.3);
  const std::size_t dim = op.dimension();
  const std::vector<double> x = random_state(dim, 1);
  const std::vector<double> y = random_state(dim, 2);
  std::vector<double> hx(dim), hy(dim);
  op.apply_vec(x, hx);
  op.apply_vec(y, hy);
  double xy = 0.0, yx = 0.0;
  for (std::size_t k = 0; k < dim; ++k) {
    xy += x[k] * hy[k];
    yx += y[k] * hx[k];
  }
  CHECK(xy == doctest::Approx(yx).epsilon(1e-12));
}

TEST_CASE("matrix-free apply equals the dense assembly") {
  const Lattice lat = build_patch(1, 1.0, Impurity{2, -0.4});
  const double h = 2.345;
  const HamiltonianOperator op = build_operator(lat, h);
  const DenseMatrix m = dense_hamiltonian(lat, h);
  const std::vector<double> x = random_state(op.dimension(), 3);
  std::vector<double> fast(op.dimension()), slow(op.dimension(), 0.0);
  op.apply_vec(x, fast);
  for (std::size_t r = 0; r < m.dim; ++r)
    for (std::size_t c = 0; c < m.dim; ++c) slow[r] += m.at(r, c) * x[c];
  for (std::size_t k = 0; k < op.dimension(); ++k)
    CHECK(fast[k] == doctest::Approx(slow[k]).epsilon(1e-12));
}

TEST_CASE("lower bound really bounds the spectrum") {
  for (double h : {0.0, 0.5, 3.0}) {
    const Lattice lat = build_patch(1, 1.0);
    const HamiltonianOperator op = build_operator(lat, h);
    const DenseEig eig = dense_eigensolve(dense_hamiltonian(lat, h));
    CHECK(op.spectrum_lower_bound() <= eig.eigenvalues[0] + 1e-12);
  }
}

TEST_CASE("exchange-term string placement") {
  ColumnStringStructure s = column_string_structure(3, 2, 5);
  CHECK(s.first_row == 13);
  CHECK(s.run_length == 4);
  CHECK(s.run_count == 4);

  s = column_string_structure(1, 0, 2);
  CHECK(s.first_row == 4);
  CHECK(s.run_length == 1);
  CHECK(s.run_count == 2);

  s = column_string_structure(2, 0, 4);
  CHECK(s.first_row == 6);
  CHECK(s.run_length == 1);
  CHECK(s.run_count == 8);

  CHECK_THROWS_AS(column_string_structure(2, 2, 4), std::invalid_argument);
  CHECK_THROWS_AS(column_string_structure(1, 2, 4), std::invalid_argument);
  CHECK_THROWS_AS(column_string_structure(4, 0, 4), std::invalid_argument);
}

TEST_CASE("string placement matches the dense bond matrix") {
  const int n = 4;
  for (int a = 1; a <= n; ++a)
    for (int b = a + 1; b <= n; ++b) {
      const DenseMatrix m = dense_bond_matrix(a, b, n);
      const ColumnStringStructure s = column_string_structure(n - a, n - b, n);

      // first nonzero row of column 0, 1-based
      std::size_t first = 0;
      for (std::size_t r = 0; r < m.dim; ++r)
        if (m.at(r, 0) != 0.0) {
          first = r + 1;
          break;
        }
      CHECK(first == s.first_row);

      // maximal diagonal runs below the main diagonal all share one length
      std::uint64_t runs = 0;
      for (std::size_t c = 0; c < m.dim; ++c)
        for (std::size_t r = c + 1; r < m.dim; ++r) {
          if (m.at(r, c) == 0.0) continue;
          if (c > 0 && m.at(r - 1, c - 1) != 0.0) continue;  // continuation, not a start
          std::size_t len = 0;
          while (r + len < m.dim && m.at(r + len, c + len) != 0.0) ++len;
          CHECK(len == s.run_length);
          ++runs;
        }
      CHECK(runs == s.run_count);
    }
}

TEST_CASE("operator construction guards") {
  CHECK_THROWS_AS(build_operator(chain(2), std::nan("")), std::invalid_argument);
}
