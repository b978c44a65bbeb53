#ifndef SHIFTSPLIT_DENSE_HPP
#define SHIFTSPLIT_DENSE_HPP

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "shiftsplit/linear_operator.hpp"
#include "shiftsplit/sparse.hpp"

namespace shiftsplit {

using Complex = std::complex<double>;
using ComplexList = std::vector<Complex>;
using ComplexVector = std::vector<Complex>;

/// Row-major dense real matrix for desk-scale analysis.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), values_(rows * cols, fill) {}
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> values);
  DenseMatrix(std::initializer_list<std::initializer_list<double>> rows);

  static DenseMatrix identity(std::size_t n);
  static DenseMatrix from_sparse(const SparseMatrix& a);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }

  double& operator()(std::size_t i, std::size_t j) {
    return values_[i * cols_ + j];
  }
  double operator()(std::size_t i, std::size_t j) const {
    return values_[i * cols_ + j];
  }

  std::span<const double> values() const noexcept { return values_; }
  std::span<double> row(std::size_t i) {
    return {values_.data() + i * cols_, cols_};
  }
  std::span<const double> row(std::size_t i) const {
    return {values_.data() + i * cols_, cols_};
  }

  Vector column(std::size_t j) const;
  void set_column(std::size_t j, std::span<const double> v);

  Vector multiply(std::span<const double> x) const;
  DenseMatrix transpose() const;
  double frobenius_norm() const;
  double trace() const;

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
};

DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix operator+(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix operator*(double c, const DenseMatrix& a);

/// LU factorization with partial pivoting, kept for repeated solves.
class LuFactorization {
 public:
  /// Throws SingularMatrixError when a pivot is exactly zero after pivoting.
  explicit LuFactorization(DenseMatrix a);

  std::size_t order() const noexcept { return lu_.rows(); }
  Vector solve(std::span<const double> b) const;
  double determinant() const;

 private:
  DenseMatrix lu_;
  std::vector<std::size_t> pivots_;
  int sign_ = 1;
};

Vector lu_solve(const DenseMatrix& a, std::span<const double> b);

/// All eigenvalues of a square matrix: balancing, Householder reduction to
/// Hessenberg form, then Francis double-shift QR. Throws NumericalFailure
/// after 30*order sweeps without full deflation.
ComplexList eigvals(const DenseMatrix& a);

/// Eigenvector for an (approximate) eigenvalue by shifted inverse iteration,
/// normalized to unit 2-norm.
ComplexVector inverse_iteration(const DenseMatrix& a, Complex lambda,
                                std::size_t steps = 3);

struct NormEstimate {
  double value = 0.0;
  bool converged = false;
  std::size_t iterations = 0;
};

/// 2-norm estimate by power iteration on op^T op. Needs op.apply_transpose.
NormEstimate norm2_est(const LinearOperator& op, double tol = 1e-4,
                       std::size_t maxit = 1000);

/// Both roots of x^2 - a x + b = 0 lie strictly inside the unit disk.
bool roots_in_unit_disk_real(double a, double b);

/// Both roots of x^2 - phi x + psi = 0 lie strictly inside the unit disk.
bool roots_in_unit_disk_complex(Complex phi, Complex psi);

}  // namespace shiftsplit

#endif  // SHIFTSPLIT_DENSE_HPP
