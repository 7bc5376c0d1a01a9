#ifndef TFIM2D_ENTANGLEMENT_HPP
#define TFIM2D_ENTANGLEMENT_HPP

#include <array>

#include "tfim2d/linalg.hpp"
#include "tfim2d/rdm.hpp"

namespace tfim2d {

struct ConcurrenceResult {
  double concurrence = 0.0;
  std::array<double, 4> epsilons{};  // descending square roots of the eigenvalues of rho*rho_tilde
  double eof = 0.0;
};

/// Concurrence of an arbitrary real two-qubit density matrix:
/// C = max(0, e1 - e2 - e3 - e4) where the e's are the descending square
/// roots of the eigenvalues of rho * (YY rho YY). For real rho they equal
/// |eig(rho YY)|, evaluated here as the absolute eigenvalues of the
/// symmetric matrix L^T YY L with rho = L L^T, which keeps tiny epsilons at
/// full absolute accuracy. Validates trace and positivity.
ConcurrenceResult concurrence_general(const Mat4& rho);

/// Closed form for the X-structured RDM:
/// C = 2 max(0, |rho14| - sqrt(rho22 rho33), |rho23| - sqrt(rho11 rho44)).
ConcurrenceResult concurrence_x_state(const ReducedDensityMatrix& rho);

/// h((1 + sqrt(1 - C^2)) / 2) with h the binary entropy; 0 at C=0, 1 at C=1.
double entanglement_of_formation(double concurrence);

double binary_entropy(double x);

}  // namespace tfim2d

#endif
