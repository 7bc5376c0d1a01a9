#ifndef TFIM2D_ANALYSIS_HPP
#define TFIM2D_ANALYSIS_HPP

#include <optional>
#include <utility>
#include <vector>

#include "tfim2d/lattice.hpp"
#include "tfim2d/tracemin.hpp"

namespace tfim2d {

struct LatticeSpec {
  int shell_radius = 1;
  double j = 1.0;
  std::optional<Impurity> impurity;
};

/// Inclusive uniform grid; step must be positive and divide the range.
struct LambdaGrid {
  double start = 0.0;
  double stop = 0.0;
  double step = 0.0;
  std::vector<double> points() const;
  bool operator==(const LambdaGrid&) const = default;
};

struct SweepSpec {
  LatticeSpec lattice;
  LambdaGrid grid;
  std::vector<std::pair<int, int>> pairs;  // empty selects every bonded pair
  bool want_gap = false;
  bool want_derivative = false;
  SolverConfig solver;
  bool warm_start = true;
};

struct SweepRecord {
  double lambda = 0.0;
  int site_i = 0;
  int site_j = 0;
  double concurrence = 0.0;
  double eof = 0.0;
  std::optional<double> gap;
  std::optional<double> d_concurrence;  // filled by attach_derivatives
  double alpha = 0.0;
  bool converged = true;
};

/// Ground-state sweep over the λ grid (λ = h/J). Records come out in
/// (λ, pair) order. At λ=0 the ground state is degenerate and carries no
/// field-induced coherence, so the record is written with C = 0 directly.
/// Solver non-convergence flags the records and the sweep continues.
std::vector<SweepRecord> run_sweep(const SweepSpec& spec);

/// dC/dλ by central differences in the interior and one-sided differences at
/// the ends. Requires a uniform grid.
std::vector<std::pair<double, double>> derivative_curve(std::span<const double> lambdas,
                                                        std::span<const double> values);

/// Fill d_concurrence for every record of a single-α sweep, pair by pair.
void attach_derivatives(std::vector<SweepRecord>& records);

struct GapPoint {
  double lambda = 0.0;
  double gap = 0.0;
  bool converged = true;
};

/// E1 - E0 along the grid (needs solver.n_wanted >= 2; enforced here).
std::vector<GapPoint> gap_curve(const SweepSpec& spec);

/// Repeat a sweep for each bond-defect strength; records carry their alpha.
std::vector<SweepRecord> impurity_scan(const SweepSpec& base, int impurity_site,
                                       std::span<const double> alphas);

struct Peak {
  std::size_t index = 0;      // grid argmax
  double lambda = 0.0;        // grid location
  double value = 0.0;         // value at the grid point
  double lambda_refined = 0.0;  // parabolic vertex through the three points around the max
};

Peak find_peak(std::span<const double> lambdas, std::span<const double> values);

}  // namespace tfim2d

#endif
