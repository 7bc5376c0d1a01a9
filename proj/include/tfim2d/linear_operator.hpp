#ifndef TFIM2D_LINEAR_OPERATOR_HPP
#define TFIM2D_LINEAR_OPERATOR_HPP

#include <cstddef>
#include <span>

#include "tfim2d/linalg.hpp"

namespace tfim2d {

/// Symmetric linear operator exposed only through matrix-vector products.
class SymOperator {
 public:
  virtual ~SymOperator() = default;
  virtual std::size_t dimension() const = 0;
  virtual void apply_vec(std::span<const double> in, std::span<double> out) const = 0;
  /// Lower bound on the spectrum (Gershgorin or better).
  virtual double spectrum_lower_bound() const = 0;

  void apply(const Block& in, Block& out) const;
};

/// A + sigma*I wrapper used to make an indefinite operator positive definite.
class ShiftedOperator final : public SymOperator {
 public:
  ShiftedOperator(const SymOperator& base, double sigma) : base_(base), sigma_(sigma) {}
  std::size_t dimension() const override { return base_.dimension(); }
  void apply_vec(std::span<const double> in, std::span<double> out) const override;
  double spectrum_lower_bound() const override { return base_.spectrum_lower_bound() + sigma_; }
  double sigma() const { return sigma_; }

 private:
  const SymOperator& base_;
  double sigma_;
};

}  // namespace tfim2d

#endif
