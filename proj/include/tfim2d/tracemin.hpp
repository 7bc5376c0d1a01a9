#ifndef TFIM2D_TRACEMIN_HPP
#define TFIM2D_TRACEMIN_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "tfim2d/linalg.hpp"
#include "tfim2d/linear_operator.hpp"

namespace tfim2d {

struct SolverConfig {
  int block_size = 4;
  int n_wanted = 1;
  double outer_tol = 1e-10;     // residual tolerance, relative to max(1, |eigenvalue|)
  double inner_rel_tol = 1e-2;  // CG residual reduction per correction solve
  int max_outer = 600;
  int max_inner = 250;
  std::uint64_t seed = 0x5eed2024;
  /// Fixed spectral shift making A + sigma*I positive definite; when unset the
  /// magnitude of the Gershgorin lower bound plus one is used.
  std::optional<double> shift;
  /// Re-tighten the shift from Ritz data once the iteration settles, which
  /// sharpens the eigenvalue ratios the outer convergence rate depends on.
  /// Only active when `shift` is unset.
  bool adaptive_shift = true;
  /// When set, one "outer_iter,trace,max_residual" CSV line per iteration.
  std::ostream* diagnostics = nullptr;

  bool operator==(const SolverConfig&) const = default;
};

struct EigenResult {
  std::vector<double> eigenvalues;    // ascending, n_wanted of them
  Block eigenvectors;                 // dim x n_wanted, orthonormal columns
  std::vector<double> residual_norms; // matching eigenvalues
  int outer_iterations = 0;
  bool converged = false;
  double shift_used = 0.0;
  std::vector<double> trace_history;  // block trace after each section step
  bool trace_monotone = true;
  Block basis;                        // full dim x block_size Ritz basis, for warm starts
  std::vector<double> basis_values;   // all block_size Ritz values, ascending
};

/// One section step: orthonormalize X through its Gram matrix, project the
/// operator, and rotate to Ritz vectors. Columns that collapse in the Gram
/// eigendecomposition (eigenvalue under 1e-12 of the largest) are replaced
/// with fresh random vectors before proceeding.
struct RitzSection {
  Block qtilde;                    // dim x p, orthonormal
  std::vector<double> w;           // p x p rotation, column-major
  Block xbar;                      // qtilde * w, section-diagonalizing basis
  Block a_xbar;                    // op * xbar
  std::vector<double> ritz_values; // ascending
  int rank_replacements = 0;
};

RitzSection ritz_section(const SymOperator& op, Block x, std::uint64_t replacement_seed = 0);

/// Projected-CG solve of (I-P) A (I-P) D = (I-P) A Xbar with P = Xbar Xbar^T,
/// run column by column. The right-hand side equals the Ritz residual block,
/// and iterates are re-projected every step to stay orthogonal to Xbar.
struct CorrectionResult {
  Block d;
  int cg_iterations = 0;            // total across columns
  bool curvature_breakdown = false; // hit p^T A p <= 0, operator not PD there
  double max_projection_drift = 0.0;  // max ||Xbar^T r|| / ||r|| seen after re-projection
};

CorrectionResult correction_step(const SymOperator& op, const RitzSection& section,
                                 double inner_rel_tol, int max_inner);

/// Block trace-minimization eigensolver for the lowest eigenpairs of a
/// symmetric operator. A positive shift keeps the quadratic form definite;
/// each iteration performs a section step and a projected-CG correction,
/// so the block trace never increases. Non-convergence within max_outer
/// returns the best basis with converged=false rather than throwing.
EigenResult solve_lowest(const SymOperator& op, const SolverConfig& config,
                         const Block* warm_start = nullptr);

}  // namespace tfim2d

#endif
