#ifndef SHIFTSPLIT_SPARSE_HPP
#define SHIFTSPLIT_SPARSE_HPP

#include <cstddef>
#include <span>
#include <vector>

namespace shiftsplit {

using Vector = std::vector<double>;

/// Coordinate entry used to build a SparseMatrix.
struct Triplet {
  std::size_t row;
  std::size_t col;
  double value;
};

/// Real sparse matrix in compressed-row storage.
///
/// Column indices within a row are strictly increasing and duplicate free.
/// Instances are immutable once built.
class SparseMatrix {
 public:
  SparseMatrix() : row_offsets_(1, 0) {}

  /// Takes ownership of raw CSR arrays; throws DimensionError if they violate
  /// the storage invariants.
  SparseMatrix(std::size_t rows, std::size_t cols,
               std::vector<std::size_t> row_offsets,
               std::vector<std::size_t> col_indices, std::vector<double> values);

  /// Sorts the triplets, sums duplicates and drops entries that end up zero.
  static SparseMatrix from_triplets(std::size_t rows, std::size_t cols,
                                    std::vector<Triplet> triplets);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t nnz() const noexcept { return values_.size(); }

  std::span<const std::size_t> row_offsets() const noexcept {
    return row_offsets_;
  }
  std::span<const std::size_t> col_indices() const noexcept {
    return col_indices_;
  }
  std::span<const double> values() const noexcept { return values_; }

  /// Stored value at (i, j), zero if not stored.
  double at(std::size_t i, std::size_t j) const;

  /// y = A x
  void multiply(std::span<const double> x, std::span<double> y) const;
  /// y += scale * A x
  void multiply_add(std::span<const double> x, std::span<double> y,
                    double scale = 1.0) const;
  /// y = A^T x
  void multiply_transpose(std::span<const double> x, std::span<double> y) const;

  std::vector<Triplet> to_triplets() const;

  friend bool operator==(const SparseMatrix&, const SparseMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::size_t> row_offsets_;
  std::vector<std::size_t> col_indices_;
  std::vector<double> values_;
};

/// scale * tridiag(sub, diag, sup) of order n.
SparseMatrix build_tridiag(std::size_t n, double sub, double diag, double sup,
                           double scale = 1.0);

SparseMatrix identity(std::size_t n);

/// Kronecker product a (x) b.
SparseMatrix kron(const SparseMatrix& a, const SparseMatrix& b);

Vector spmv(const SparseMatrix& a, std::span<const double> x);

SparseMatrix transpose(const SparseMatrix& a);

/// a + beta * b
SparseMatrix add(const SparseMatrix& a, const SparseMatrix& b,
                 double beta = 1.0);

SparseMatrix scale(const SparseMatrix& a, double c);

/// [a; b]
SparseMatrix vstack(const SparseMatrix& a, const SparseMatrix& b);

/// [a, b]
SparseMatrix hstack(const SparseMatrix& a, const SparseMatrix& b);

/// [a, 0; 0, b]
SparseMatrix block_diag(const SparseMatrix& a, const SparseMatrix& b);

/// Rows [r0, r1) and columns [c0, c1) of a.
SparseMatrix submatrix(const SparseMatrix& a, std::size_t r0, std::size_t r1,
                       std::size_t c0, std::size_t c1);

inline std::size_t nnz(const SparseMatrix& a) { return a.nnz(); }

double max_abs(const SparseMatrix& a);

// Dense vector helpers shared by the solvers.
double dot(std::span<const double> x, std::span<const double> y);
double norm2(std::span<const double> x);
/// y += a * x
void axpy(double a, std::span<const double> x, std::span<double> y);

}  // namespace shiftsplit

#endif  // SHIFTSPLIT_SPARSE_HPP
