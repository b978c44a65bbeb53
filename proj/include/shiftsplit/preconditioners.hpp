#ifndef SHIFTSPLIT_PRECONDITIONERS_HPP
#define SHIFTSPLIT_PRECONDITIONERS_HPP

#include <memory>
#include <optional>
#include <span>
#include <string_view>

#include "shiftsplit/dense.hpp"
#include "shiftsplit/krylov.hpp"
#include "shiftsplit/saddle.hpp"

namespace shiftsplit {

enum class PrecondKind { ss, rss, ppss, aug };

/// How the inner (Schur and shifted-A) systems are solved.
///   auto_select: CG when the operator is SPD, GMRES(10) otherwise
///   direct:      dense LU, desk scale only
enum class InnerPolicy { auto_select, cg, gmres10, direct };

/// Concrete inner solver after policy resolution.
enum class InnerSolver { cg, gmres10, direct };

std::string_view to_string(PrecondKind k);
std::string_view to_string(InnerPolicy p);
std::string_view to_string(InnerSolver s);
std::optional<PrecondKind> parse_precond_kind(std::string_view s);
std::optional<InnerPolicy> parse_inner_policy(std::string_view s);

struct InnerSpec {
  InnerPolicy policy = InnerPolicy::auto_select;
  StoppingRule rule;
};

struct PrecondSpec {
  PrecondKind kind = PrecondKind::ss;
  double alpha = 1.0;
  InnerSpec inner;

  /// Throws ConfigError for alpha <= 0 or an invalid rule.
  void validate() const;
};

/// Reduced operators arising from block elimination:
///   shifted:    alpha I + A + (1/alpha) B^T C     (SS)
///   unshifted:  A + (1/alpha) B^T C               (RSS, Aug)
///   shift_only: alpha I + (1/alpha) B^T C         (second PPSS stage)
class SchurOperator {
 public:
  enum class Variant { shifted, unshifted, shift_only };

  SchurOperator(const SaddleSystem& sys, double alpha, Variant variant);

  std::size_t size() const noexcept { return sys_->n(); }
  double alpha() const noexcept { return alpha_; }
  Variant variant() const noexcept { return variant_; }

  /// y = S x using three sparse products.
  void apply(std::span<const double> x, std::span<double> y) const;
  LinearOperator as_operator() const;

  /// Dense S, desk scale only.
  DenseMatrix assemble_dense() const;

 private:
  const SaddleSystem* sys_;
  double alpha_;
  Variant variant_;
};

/// Inner solver for the Schur stage: under auto_select CG iff C = k B with
/// k > 0 (the Schur operators are then SPD), otherwise GMRES(10). Throws
/// ConfigError for `direct` beyond desk scale.
InnerSolver select_inner(const SaddleSystem& sys, const PrecondSpec& spec);

/// z = P^{-1} r for one of the four preconditioners, with factorizations (for
/// `direct`) computed once at construction. The SS application drops the
/// factor 1/2 of P_SS, i.e. it inverts alpha I + A_saddle. The PPSS
/// application inverts P_PPSS including its 1/(2 alpha) factor. Under the
/// `direct` policy each application ends with one step of iterative
/// refinement against P itself.
class Preconditioner {
 public:
  Preconditioner(const SaddleSystem& sys, PrecondSpec spec);
  ~Preconditioner();
  Preconditioner(Preconditioner&&) noexcept;
  Preconditioner& operator=(Preconditioner&&) noexcept;

  const PrecondSpec& spec() const noexcept { return spec_; }
  InnerSolver schur_solver() const noexcept { return schur_solver_; }

  PrecondOutcome apply(std::span<const double> r, std::span<double> z) const;
  Vector apply(std::span<const double> r) const;

  /// Adapter for fgmres; the preconditioner must outlive the callable.
  PrecondApply as_apply() const;

 private:
  struct Stage;
  PrecondOutcome solve_stage(const Stage& stage, std::span<const double> rhs,
                             std::span<double> x) const;
  PrecondOutcome apply_once(std::span<const double> r, std::span<double> z) const;
  /// y = P z for the matrix the application inverts.
  void multiply(std::span<const double> z, std::span<double> y) const;

  const SaddleSystem* sys_;
  PrecondSpec spec_;
  InnerSolver schur_solver_;
  std::unique_ptr<Stage> schur_;
  std::unique_ptr<Stage> shifted_a_;  // PPSS first stage only
};

Vector apply_ss(const SaddleSystem& sys, double alpha, const InnerSpec& inner,
                std::span<const double> r);
Vector apply_rss(const SaddleSystem& sys, double alpha, const InnerSpec& inner,
                 std::span<const double> r);
Vector apply_ppss(const SaddleSystem& sys, double alpha, const InnerSpec& inner,
                  std::span<const double> r);
Vector apply_aug(const SaddleSystem& sys, double alpha, const InnerSpec& inner,
                 std::span<const double> r);

}  // namespace shiftsplit

#endif  // SHIFTSPLIT_PRECONDITIONERS_HPP
