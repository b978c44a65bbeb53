#ifndef SHIFTSPLIT_LINEAR_OPERATOR_HPP
#define SHIFTSPLIT_LINEAR_OPERATOR_HPP

#include <cstddef>
#include <functional>
#include <span>

#include "shiftsplit/sparse.hpp"

namespace shiftsplit {

/// Apply-only operator y <- op(x). `apply_transpose` is optional and only
/// needed by the 2-norm estimator.
struct LinearOperator {
  using Kernel = std::function<void(std::span<const double>, std::span<double>)>;

  std::size_t rows = 0;
  std::size_t cols = 0;
  Kernel apply;
  Kernel apply_transpose;

  Vector operator()(std::span<const double> x) const {
    Vector y(rows);
    apply(x, y);
    return y;
  }

  bool has_transpose() const { return static_cast<bool>(apply_transpose); }
};

/// Wraps a sparse matrix; the matrix must outlive the operator.
inline LinearOperator make_operator(const SparseMatrix& a) {
  return {a.rows(), a.cols(),
          [&a](std::span<const double> x, std::span<double> y) {
            a.multiply(x, y);
          },
          [&a](std::span<const double> x, std::span<double> y) {
            a.multiply_transpose(x, y);
          }};
}

}  // namespace shiftsplit

#endif  // SHIFTSPLIT_LINEAR_OPERATOR_HPP
