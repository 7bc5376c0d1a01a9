#include "tfim2d/linear_operator.hpp"

#include <stdexcept>

namespace tfim2d {

void SymOperator::apply(const Block& in, Block& out) const {
  if (in.rows != dimension()) throw std::invalid_argument("apply: dimension mismatch");
  out.rows = in.rows;
  out.cols = in.cols;
  out.data.resize(in.data.size());
  for (int j = 0; j < in.cols; ++j) apply_vec(in.col_span(j), out.col_span(j));
}

void ShiftedOperator::apply_vec(std::span<const double> in, std::span<double> out) const {
  base_.apply_vec(in, out);
  for (std::size_t k = 0; k < in.size(); ++k) out[k] += sigma_ * in[k];
}

}  // namespace tfim2d
