#include "shiftsplit/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "shiftsplit/errors.hpp"

namespace shiftsplit {

namespace {

std::size_t checked_mul(std::size_t a, std::size_t b, const char* what) {
  if (a != 0 && b > std::numeric_limits<std::size_t>::max() / a) {
    throw DimensionError(std::string(what) + ": dimension overflow");
  }
  return a * b;
}

std::string shape(const SparseMatrix& a) {
  return std::to_string(a.rows()) + "x" + std::to_string(a.cols());
}

}  // namespace

SparseMatrix::SparseMatrix(std::size_t rows, std::size_t cols,
                           std::vector<std::size_t> row_offsets,
                           std::vector<std::size_t> col_indices,
                           std::vector<double> values)
    : rows_(rows),
      cols_(cols),
      row_offsets_(std::move(row_offsets)),
      col_indices_(std::move(col_indices)),
      values_(std::move(values)) {
  if (row_offsets_.size() != rows_ + 1) {
    throw DimensionError("row_offsets must have rows+1 entries");
  }
  if (row_offsets_.front() != 0 || row_offsets_.back() != values_.size() ||
      col_indices_.size() != values_.size()) {
    throw DimensionError("row_offsets inconsistent with stored values");
  }
  for (std::size_t i = 0; i < rows_; ++i) {
    if (row_offsets_[i] > row_offsets_[i + 1]) {
      throw DimensionError("row_offsets must be nondecreasing");
    }
    for (std::size_t k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k) {
      if (col_indices_[k] >= cols_) {
        throw DimensionError("column index out of range in row " +
                             std::to_string(i));
      }
      if (k > row_offsets_[i] && col_indices_[k] <= col_indices_[k - 1]) {
        throw DimensionError("column indices must strictly increase in row " +
                             std::to_string(i));
      }
    }
  }
}

SparseMatrix SparseMatrix::from_triplets(std::size_t rows, std::size_t cols,
                                         std::vector<Triplet> triplets) {
  for (const auto& t : triplets) {
    if (t.row >= rows || t.col >= cols) {
      throw DimensionError("triplet (" + std::to_string(t.row) + ", " +
                           std::to_string(t.col) + ") outside " +
                           std::to_string(rows) + "x" + std::to_string(cols));
    }
  }
  std::stable_sort(triplets.begin(), triplets.end(),
                   [](const Triplet& a, const Triplet& b) {
                     return a.row != b.row ? a.row < b.row : a.col < b.col;
                   });

  std::vector<std::size_t> offsets(rows + 1, 0);
  std::vector<std::size_t> cols_out;
  std::vector<double> vals_out;
  cols_out.reserve(triplets.size());
  vals_out.reserve(triplets.size());

  std::size_t k = 0;
  while (k < triplets.size()) {
    const std::size_t r = triplets[k].row;
    const std::size_t c = triplets[k].col;
    double sum = 0.0;
    for (; k < triplets.size() && triplets[k].row == r && triplets[k].col == c;
         ++k) {
      sum += triplets[k].value;
    }
    if (sum != 0.0) {
      cols_out.push_back(c);
      vals_out.push_back(sum);
      ++offsets[r + 1];
    }
  }
  for (std::size_t i = 0; i < rows; ++i) offsets[i + 1] += offsets[i];
  return SparseMatrix(rows, cols, std::move(offsets), std::move(cols_out),
                      std::move(vals_out));
}

double SparseMatrix::at(std::size_t i, std::size_t j) const {
  if (i >= rows_ || j >= cols_) throw DimensionError("index out of range");
  const auto first = col_indices_.begin() + row_offsets_[i];
  const auto last = col_indices_.begin() + row_offsets_[i + 1];
  const auto it = std::lower_bound(first, last, j);
  if (it == last || *it != j) return 0.0;
  return values_[static_cast<std::size_t>(it - col_indices_.begin())];
}

void SparseMatrix::multiply(std::span<const double> x,
                            std::span<double> y) const {
  if (x.size() != cols_ || y.size() != rows_) {
    throw DimensionError("spmv: operand length mismatch");
  }
  for (std::size_t i = 0; i < rows_; ++i) {
    double sum = 0.0;
    for (std::size_t k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k) {
      sum += values_[k] * x[col_indices_[k]];
    }
    y[i] = sum;
  }
}

void SparseMatrix::multiply_add(std::span<const double> x, std::span<double> y,
                                double scale) const {
  if (x.size() != cols_ || y.size() != rows_) {
    throw DimensionError("spmv: operand length mismatch");
  }
  for (std::size_t i = 0; i < rows_; ++i) {
    double sum = 0.0;
    for (std::size_t k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k) {
      sum += values_[k] * x[col_indices_[k]];
    }
    y[i] += scale * sum;
  }
}

void SparseMatrix::multiply_transpose(std::span<const double> x,
                                      std::span<double> y) const {
  if (x.size() != rows_ || y.size() != cols_) {
    throw DimensionError("transposed spmv: operand length mismatch");
  }
  std::fill(y.begin(), y.end(), 0.0);
  for (std::size_t i = 0; i < rows_; ++i) {
    const double xi = x[i];
    for (std::size_t k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k) {
      y[col_indices_[k]] += values_[k] * xi;
    }
  }
}

std::vector<Triplet> SparseMatrix::to_triplets() const {
  std::vector<Triplet> out;
  out.reserve(nnz());
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k) {
      out.push_back({i, col_indices_[k], values_[k]});
    }
  }
  return out;
}

SparseMatrix build_tridiag(std::size_t n, double sub, double diag, double sup,
                           double scale) {
  if (n == 0) throw DimensionError("build_tridiag: n must be at least 1");
  std::vector<Triplet> t;
  t.reserve(3 * n);
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0) t.push_back({i, i - 1, scale * sub});
    t.push_back({i, i, scale * diag});
    if (i + 1 < n) t.push_back({i, i + 1, scale * sup});
  }
  return SparseMatrix::from_triplets(n, n, std::move(t));
}

SparseMatrix identity(std::size_t n) {
  std::vector<std::size_t> offsets(n + 1);
  std::vector<std::size_t> cols(n);
  for (std::size_t i = 0; i <= n; ++i) offsets[i] = i;
  for (std::size_t i = 0; i < n; ++i) cols[i] = i;
  return SparseMatrix(n, n, std::move(offsets), std::move(cols),
                      Vector(n, 1.0));
}

SparseMatrix kron(const SparseMatrix& a, const SparseMatrix& b) {
  const std::size_t rows = checked_mul(a.rows(), b.rows(), "kron");
  const std::size_t cols = checked_mul(a.cols(), b.cols(), "kron");
  checked_mul(a.nnz(), b.nnz(), "kron");

  const auto ao = a.row_offsets();
  const auto ac = a.col_indices();
  const auto av = a.values();
  const auto bo = b.row_offsets();
  const auto bc = b.col_indices();
  const auto bv = b.values();

  std::vector<std::size_t> offsets(rows + 1, 0);
  std::vector<std::size_t> col_out;
  std::vector<double> val_out;
  col_out.reserve(a.nnz() * b.nnz());
  val_out.reserve(a.nnz() * b.nnz());

  // Row (ia, ib) of the product visits a's row ia in order and, for each
  // entry, b's row ib in order; the resulting columns are increasing.
  for (std::size_t ia = 0; ia < a.rows(); ++ia) {
    for (std::size_t ib = 0; ib < b.rows(); ++ib) {
      for (std::size_t ka = ao[ia]; ka < ao[ia + 1]; ++ka) {
        for (std::size_t kb = bo[ib]; kb < bo[ib + 1]; ++kb) {
          col_out.push_back(ac[ka] * b.cols() + bc[kb]);
          val_out.push_back(av[ka] * bv[kb]);
        }
      }
      offsets[ia * b.rows() + ib + 1] = col_out.size();
    }
  }
  return SparseMatrix(rows, cols, std::move(offsets), std::move(col_out),
                      std::move(val_out));
}

Vector spmv(const SparseMatrix& a, std::span<const double> x) {
  Vector y(a.rows());
  a.multiply(x, y);
  return y;
}

SparseMatrix transpose(const SparseMatrix& a) {
  std::vector<std::size_t> offsets(a.cols() + 1, 0);
  for (const auto c : a.col_indices()) ++offsets[c + 1];
  for (std::size_t j = 0; j < a.cols(); ++j) offsets[j + 1] += offsets[j];

  std::vector<std::size_t> next(offsets.begin(), offsets.end() - 1);
  std::vector<std::size_t> rows_out(a.nnz());
  std::vector<double> vals_out(a.nnz());
  const auto ro = a.row_offsets();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = ro[i]; k < ro[i + 1]; ++k) {
      const std::size_t dst = next[a.col_indices()[k]]++;
      rows_out[dst] = i;
      vals_out[dst] = a.values()[k];
    }
  }
  return SparseMatrix(a.cols(), a.rows(), std::move(offsets),
                      std::move(rows_out), std::move(vals_out));
}

SparseMatrix add(const SparseMatrix& a, const SparseMatrix& b, double beta) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError("add: shapes " + shape(a) + " and " + shape(b) +
                         " differ");
  }
  auto t = a.to_triplets();
  for (auto e : b.to_triplets()) {
    e.value *= beta;
    t.push_back(e);
  }
  return SparseMatrix::from_triplets(a.rows(), a.cols(), std::move(t));
}

SparseMatrix scale(const SparseMatrix& a, double c) {
  auto t = a.to_triplets();
  for (auto& e : t) e.value *= c;
  return SparseMatrix::from_triplets(a.rows(), a.cols(), std::move(t));
}

SparseMatrix vstack(const SparseMatrix& a, const SparseMatrix& b) {
  if (a.cols() != b.cols()) {
    throw DimensionError("vstack: column counts of " + shape(a) + " and " +
                         shape(b) + " differ");
  }
  auto t = a.to_triplets();
  for (auto e : b.to_triplets()) {
    e.row += a.rows();
    t.push_back(e);
  }
  return SparseMatrix::from_triplets(a.rows() + b.rows(), a.cols(),
                                     std::move(t));
}

SparseMatrix hstack(const SparseMatrix& a, const SparseMatrix& b) {
  if (a.rows() != b.rows()) {
    throw DimensionError("hstack: row counts of " + shape(a) + " and " +
                         shape(b) + " differ");
  }
  auto t = a.to_triplets();
  for (auto e : b.to_triplets()) {
    e.col += a.cols();
    t.push_back(e);
  }
  return SparseMatrix::from_triplets(a.rows(), a.cols() + b.cols(),
                                     std::move(t));
}

SparseMatrix block_diag(const SparseMatrix& a, const SparseMatrix& b) {
  auto t = a.to_triplets();
  for (auto e : b.to_triplets()) {
    e.row += a.rows();
    e.col += a.cols();
    t.push_back(e);
  }
  return SparseMatrix::from_triplets(a.rows() + b.rows(), a.cols() + b.cols(),
                                     std::move(t));
}

SparseMatrix submatrix(const SparseMatrix& a, std::size_t r0, std::size_t r1,
                       std::size_t c0, std::size_t c1) {
  if (r0 > r1 || r1 > a.rows() || c0 > c1 || c1 > a.cols()) {
    throw DimensionError("submatrix: range outside " + shape(a));
  }
  std::vector<Triplet> t;
  const auto ro = a.row_offsets();
  for (std::size_t i = r0; i < r1; ++i) {
    for (std::size_t k = ro[i]; k < ro[i + 1]; ++k) {
      const std::size_t j = a.col_indices()[k];
      if (j >= c0 && j < c1) t.push_back({i - r0, j - c0, a.values()[k]});
    }
  }
  return SparseMatrix::from_triplets(r1 - r0, c1 - c0, std::move(t));
}

double max_abs(const SparseMatrix& a) {
  double m = 0.0;
  for (const double v : a.values()) m = std::max(m, std::abs(v));
  return m;
}

double dot(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw DimensionError("dot: length mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

double norm2(std::span<const double> x) { return std::sqrt(dot(x, x)); }

void axpy(double a, std::span<const double> x, std::span<double> y) {
  if (x.size() != y.size()) throw DimensionError("axpy: length mismatch");
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

}  // namespace shiftsplit
