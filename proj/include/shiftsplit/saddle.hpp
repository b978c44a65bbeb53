#ifndef SHIFTSPLIT_SADDLE_HPP
#define SHIFTSPLIT_SADDLE_HPP

#include <cstddef>
#include <optional>
#include <span>

#include "shiftsplit/dense.hpp"
#include "shiftsplit/linear_operator.hpp"
#include "shiftsplit/sparse.hpp"

namespace shiftsplit {

/// Largest n+m for which dense factorizations and eigen-analysis are allowed.
inline constexpr std::size_t kDeskScale = 2000;

/// Asymmetric saddle point system
///
///     [ A   B^T ] [x]   [b]
///     [-C   0   ] [y] = [q]
///
/// with A (n x n) symmetric positive definite and B, C (m x n). Unknowns are
/// ordered velocity block first, pressure block second.
class SaddleSystem {
 public:
  /// Throws DimensionError on inconsistent shapes or m > n, and
  /// StructureError if `c_equals_kB` is given but C != k B entrywise.
  SaddleSystem(SparseMatrix a, SparseMatrix b, SparseMatrix c,
               std::optional<double> c_equals_kB = std::nullopt);

  std::size_t n() const noexcept { return a_.rows(); }
  std::size_t m() const noexcept { return b_.rows(); }
  std::size_t order() const noexcept { return n() + m(); }

  const SparseMatrix& A() const noexcept { return a_; }
  const SparseMatrix& B() const noexcept { return b_; }
  const SparseMatrix& C() const noexcept { return c_; }
  const SparseMatrix& Bt() const noexcept { return bt_; }
  const SparseMatrix& Ct() const noexcept { return ct_; }

  /// k when C = k B with k > 0 is known to hold.
  std::optional<double> c_equals_kB() const noexcept { return k_; }

 private:
  SparseMatrix a_, b_, c_, bt_, ct_;
  std::optional<double> k_;
};

struct AssumptionReport {
  bool a_symmetric = false;
  bool a_positive_definite = false;
  bool rank_B_full = false;
  bool rank_C_full = false;
  /// False when n+m exceeds desk scale; the three factorization based flags
  /// are then left false and mean "not checked".
  bool checked_at_scale = false;
};

/// Example Stokes generator on an s x s grid: n = 2 s^2, m = s^2, C = k B.
SaddleSystem build_stokes(std::size_t s, double mu, double k);

/// Splits an assembled (n+m) x (n+m) matrix into A, B, C. The (2,1) block
/// is stored as -C. Detects C = k B (k > 0) and records it.
SaddleSystem split_external(const SparseMatrix& full, std::size_t n,
                            std::size_t m);

/// The full sparse matrix [A B^T; -C 0].
SparseMatrix assemble(const SaddleSystem& sys);

/// y = [A x1 + B^T x2; -C x1] without forming the block matrix.
Vector block_apply(const SaddleSystem& sys, std::span<const double> x);
void block_apply(const SaddleSystem& sys, std::span<const double> x,
                 std::span<double> y);

LinearOperator block_operator(const SaddleSystem& sys);

/// f = block_apply(sys, ones) so that the exact solution is all ones.
Vector rhs_all_ones(const SaddleSystem& sys);

/// B^T C as an operator (two sparse products per application), with its
/// transpose C^T B.
LinearOperator btc_operator(const SaddleSystem& sys);

struct AlphaEstimate {
  double alpha = 0.0;
  double norm_btc = 0.0;
  double norm_a = 0.0;
  bool converged = false;
};

/// alpha_est = ||B^T C||_2 / ||A||_2 via power iteration.
AlphaEstimate alpha_est(const SaddleSystem& sys, double tol = 1e-4);

AssumptionReport check_assumptions(const SaddleSystem& sys);

/// Dense [A B^T; -C 0] for desk-scale analysis.
DenseMatrix dense_block_matrix(const SaddleSystem& sys);

}  // namespace shiftsplit

#endif  // SHIFTSPLIT_SADDLE_HPP
