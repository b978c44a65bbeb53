#include "shiftsplit/saddle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "shiftsplit/errors.hpp"

namespace shiftsplit {

namespace {

bool is_k_multiple(const SparseMatrix& c, const SparseMatrix& b, double k) {
  if (c.rows() != b.rows() || c.cols() != b.cols()) return false;
  const SparseMatrix diff = add(c, b, -k);
  const double scale = std::max(max_abs(c), 1.0);
  return max_abs(diff) <= 1e-14 * scale;
}

/// k > 0 with C = k B when the patterns agree and every ratio is the same.
std::optional<double> detect_k(const SparseMatrix& c, const SparseMatrix& b) {
  if (b.nnz() == 0 || b.nnz() != c.nnz()) return std::nullopt;
  if (!std::equal(b.row_offsets().begin(), b.row_offsets().end(),
                  c.row_offsets().begin()) ||
      !std::equal(b.col_indices().begin(), b.col_indices().end(),
                  c.col_indices().begin())) {
    return std::nullopt;
  }
  const double k = c.values()[0] / b.values()[0];
  if (!(k > 0.0) || !std::isfinite(k)) return std::nullopt;
  for (std::size_t i = 0; i < b.nnz(); ++i) {
    const double expect = k * b.values()[i];
    if (std::abs(c.values()[i] - expect) > 1e-14 * std::abs(expect)) {
      return std::nullopt;
    }
  }
  return k;
}

/// Numerical rank by Gaussian elimination with complete pivoting.
std::size_t dense_rank(DenseMatrix a) {
  const std::size_t r = a.rows();
  const std::size_t c = a.cols();
  double first_pivot = 0.0;
  std::size_t rank = 0;
  for (std::size_t k = 0; k < std::min(r, c); ++k) {
    std::size_t pi = k, pj = k;
    double best = 0.0;
    for (std::size_t i = k; i < r; ++i) {
      for (std::size_t j = k; j < c; ++j) {
        if (std::abs(a(i, j)) > best) {
          best = std::abs(a(i, j));
          pi = i;
          pj = j;
        }
      }
    }
    if (k == 0) first_pivot = best;
    const double tol = static_cast<double>(std::max(r, c)) *
                       std::numeric_limits<double>::epsilon() * first_pivot;
    if (best <= tol || best == 0.0) break;
    if (pi != k) {
      std::swap_ranges(a.row(k).begin(), a.row(k).end(), a.row(pi).begin());
    }
    if (pj != k) {
      for (std::size_t i = 0; i < r; ++i) std::swap(a(i, k), a(i, pj));
    }
    for (std::size_t i = k + 1; i < r; ++i) {
      const double l = a(i, k) / a(k, k);
      if (l == 0.0) continue;
      for (std::size_t j = k; j < c; ++j) a(i, j) -= l * a(k, j);
    }
    ++rank;
  }
  return rank;
}

bool cholesky_succeeds(DenseMatrix a) {
  const std::size_t n = a.rows();
  for (std::size_t j = 0; j < n; ++j) {
    double d = a(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= a(j, k) * a(j, k);
    if (!(d > 0.0)) return false;
    d = std::sqrt(d);
    a(j, j) = d;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = a(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= a(i, k) * a(j, k);
      a(i, j) = s / d;
    }
  }
  return true;
}

}  // namespace

SaddleSystem::SaddleSystem(SparseMatrix a, SparseMatrix b, SparseMatrix c,
                           std::optional<double> c_equals_kB)
    : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), k_(c_equals_kB) {
  if (a_.rows() != a_.cols()) throw DimensionError("A must be square");
  if (b_.cols() != a_.rows() || c_.cols() != a_.rows()) {
    throw DimensionError("B and C must have n columns");
  }
  if (b_.rows() != c_.rows()) throw DimensionError("B and C must agree in shape");
  if (b_.rows() > a_.rows()) throw DimensionError("saddle system needs m <= n");
  if (k_) {
    if (!(*k_ > 0.0)) throw StructureError("C = kB requires k > 0");
    if (!is_k_multiple(c_, b_, *k_)) {
      throw StructureError("C differs from k B for k = " + std::to_string(*k_));
    }
  }
  bt_ = transpose(b_);
  ct_ = transpose(c_);
}

SaddleSystem build_stokes(std::size_t s, double mu, double k) {
  if (s == 0) throw DimensionError("build_stokes: s must be at least 1");
  if (!(mu > 0.0) || !(k > 0.0)) {
    throw ConfigError("build_stokes: mu and k must be positive");
  }
  const double h = 1.0 / static_cast<double>(s + 1);
  const SparseMatrix t = build_tridiag(s, -1.0, 2.0, -1.0, mu / (h * h));
  const SparseMatrix f = build_tridiag(s, -1.0, 1.0, 0.0, 1.0 / h);
  const SparseMatrix i = identity(s);

  const SparseMatrix lap = add(kron(i, t), kron(t, i));
  SparseMatrix a = block_diag(lap, lap);
  SparseMatrix b = transpose(vstack(kron(i, f), kron(f, i)));
  SparseMatrix c = scale(b, k);
  return SaddleSystem(std::move(a), std::move(b), std::move(c), k);
}

SaddleSystem split_external(const SparseMatrix& full, std::size_t n,
                            std::size_t m) {
  if (full.rows() != n + m || full.cols() != n + m) {
    throw DimensionError("split_external: matrix is " +
                         std::to_string(full.rows()) + "x" +
                         std::to_string(full.cols()) + ", expected order " +
                         std::to_string(n + m));
  }
  const SparseMatrix d = submatrix(full, n, n + m, n, n + m);
  if (max_abs(d) > 1e-14) {
    throw StructureError("split_external: (2,2) block is not zero");
  }
  SparseMatrix a = submatrix(full, 0, n, 0, n);
  SparseMatrix b = transpose(submatrix(full, 0, n, n, n + m));
  SparseMatrix c = scale(submatrix(full, n, n + m, 0, n), -1.0);
  const auto k = detect_k(c, b);
  return SaddleSystem(std::move(a), std::move(b), std::move(c), k);
}

SparseMatrix assemble(const SaddleSystem& sys) {
  const SparseMatrix top = hstack(sys.A(), sys.Bt());
  const SparseMatrix zero = SparseMatrix::from_triplets(sys.m(), sys.m(), {});
  const SparseMatrix bottom = hstack(scale(sys.C(), -1.0), zero);
  return vstack(top, bottom);
}

void block_apply(const SaddleSystem& sys, std::span<const double> x,
                 std::span<double> y) {
  const std::size_t n = sys.n();
  const std::size_t m = sys.m();
  if (x.size() != n + m || y.size() != n + m) {
    throw DimensionError("block_apply: expected length " +
                         std::to_string(n + m));
  }
  const auto x1 = x.first(n);
  const auto x2 = x.subspan(n, m);
  auto y1 = y.first(n);
  auto y2 = y.subspan(n, m);
  sys.A().multiply(x1, y1);
  sys.Bt().multiply_add(x2, y1);
  sys.C().multiply(x1, y2);
  for (auto& v : y2) v = -v;
}

Vector block_apply(const SaddleSystem& sys, std::span<const double> x) {
  Vector y(sys.order());
  block_apply(sys, x, y);
  return y;
}

LinearOperator block_operator(const SaddleSystem& sys) {
  return {sys.order(), sys.order(),
          [&sys](std::span<const double> x, std::span<double> y) {
            block_apply(sys, x, y);
          },
          {}};
}

Vector rhs_all_ones(const SaddleSystem& sys) {
  const Vector ones(sys.order(), 1.0);
  return block_apply(sys, ones);
}

LinearOperator btc_operator(const SaddleSystem& sys) {
  const std::size_t n = sys.n();
  const std::size_t m = sys.m();
  return {n, n,
          [&sys, m](std::span<const double> x, std::span<double> y) {
            Vector tmp(m);
            sys.C().multiply(x, tmp);
            sys.Bt().multiply(tmp, y);
          },
          [&sys, m](std::span<const double> x, std::span<double> y) {
            Vector tmp(m);
            sys.B().multiply(x, tmp);
            sys.Ct().multiply(tmp, y);
          }};
}

AlphaEstimate alpha_est(const SaddleSystem& sys, double tol) {
  const auto btc = norm2_est(btc_operator(sys), tol);
  const auto a = norm2_est(make_operator(sys.A()), tol);
  AlphaEstimate est;
  est.norm_btc = btc.value;
  est.norm_a = a.value;
  est.alpha = btc.value / a.value;
  est.converged = btc.converged && a.converged;
  return est;
}

AssumptionReport check_assumptions(const SaddleSystem& sys) {
  AssumptionReport rep;
  const SparseMatrix& a = sys.A();
  rep.a_symmetric = transpose(a) == a;
  if (sys.order() > kDeskScale) return rep;

  rep.checked_at_scale = true;
  rep.a_positive_definite =
      rep.a_symmetric && cholesky_succeeds(DenseMatrix::from_sparse(a));
  rep.rank_B_full = dense_rank(DenseMatrix::from_sparse(sys.B())) == sys.m();
  rep.rank_C_full = dense_rank(DenseMatrix::from_sparse(sys.C())) == sys.m();
  return rep;
}

DenseMatrix dense_block_matrix(const SaddleSystem& sys) {
  if (sys.order() > kDeskScale) {
    throw ConfigError("dense_block_matrix: order " +
                      std::to_string(sys.order()) + " exceeds desk scale");
  }
  return DenseMatrix::from_sparse(assemble(sys));
}

}  // namespace shiftsplit
