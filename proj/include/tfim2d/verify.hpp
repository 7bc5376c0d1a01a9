#ifndef TFIM2D_VERIFY_HPP
#define TFIM2D_VERIFY_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace tfim2d {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct VerifyOptions {
  int trials = 200;
  int max_sites = 10;
  std::uint64_t seed = 97531;
  std::ostream* progress = nullptr;
};

/// Random-instance cross checks between the matrix-free pipeline and the
/// dense reference implementations: eigenvalues, reduced density matrices,
/// and the two concurrence routes.
std::vector<CheckResult> oracle_equivalence_checks(const VerifyOptions& opts);

/// Structural invariants: Hamiltonian run placement, trace monotonicity of
/// the eigensolver, RDM trace and entanglement ranges, the zero-field
/// convention, and equality of symmetry-equivalent pair curves.
std::vector<CheckResult> invariant_checks(const VerifyOptions& opts);

std::vector<CheckResult> run_verification(const VerifyOptions& opts);

}  // namespace tfim2d

#endif
