#ifndef SHIFTSPLIT_KRYLOV_HPP
#define SHIFTSPLIT_KRYLOV_HPP

#include <cstddef>
#include <functional>
#include <span>
#include <string_view>

#include "shiftsplit/linear_operator.hpp"
#include "shiftsplit/sparse.hpp"

namespace shiftsplit {

/// Outer and inner stopping protocol. Outer solves stop on
/// ||b - A x|| / ||b|| <= rel_tol or after max_outer iterations; inner solves
/// stop once the residual is reduced by `inner_reduction` or after
/// max_inner iterations.
struct StoppingRule {
  double rel_tol = 1e-7;
  std::size_t max_outer = 1000;
  double inner_reduction = 1e-2;
  std::size_t max_inner = 100;

  /// Throws ConfigError unless all fields are positive and rel_tol < 1.
  void validate() const;

  /// The rule an inner solve runs under.
  StoppingRule inner() const {
    return {inner_reduction, max_inner, inner_reduction, max_inner};
  }
};

enum class SolveStatus {
  converged,
  max_iterations,
  breakdown,   // CG: p^T A p <= 0
  stagnation,  // GMRES: no progress over a whole cycle
  diverged,    // stationary iteration blew up
};

std::string_view to_string(SolveStatus s);

struct SolveReport {
  std::size_t iterations = 0;
  bool converged = false;
  SolveStatus status = SolveStatus::max_iterations;
  /// Entry 0 belongs to the initial guess, then one entry per iteration.
  std::vector<double> relative_residuals;
  double wall_seconds = 0.0;
  std::size_t inner_iterations_total = 0;
  /// Count of preconditioner applications whose inner solve missed its target.
  std::size_t inner_failures = 0;
  Vector final_solution;

  double final_relative_residual() const {
    return relative_residuals.empty() ? 0.0 : relative_residuals.back();
  }
};

/// Outcome of one preconditioner application z = P^{-1} r.
struct PrecondOutcome {
  std::size_t inner_iterations = 0;
  bool inner_converged = true;
};

using PrecondApply =
    std::function<PrecondOutcome(std::span<const double>, std::span<double>)>;

/// Conjugate gradients. x0 defaults to zero when empty.
SolveReport cg(const LinearOperator& op, std::span<const double> b,
               const StoppingRule& rule, std::span<const double> x0 = {});

/// Restarted GMRES(restart) with modified Gram-Schmidt and Givens rotations.
/// restart == 0 means no restart.
SolveReport gmres(const LinearOperator& op, std::span<const double> b,
                  std::size_t restart, const StoppingRule& rule,
                  std::span<const double> x0 = {});

/// Flexible GMRES with right preconditioning; the preconditioned basis is
/// stored so `precond` may change between iterations. restart == 0 means no
/// restart.
SolveReport fgmres(const LinearOperator& op, std::span<const double> b,
                   const PrecondApply& precond, const StoppingRule& rule,
                   std::span<const double> x0 = {}, std::size_t restart = 0);

/// ||b - op(x)||_2 / ||b||_2, computed from scratch.
double relative_residual(const LinearOperator& op, std::span<const double> b,
                         std::span<const double> x);

}  // namespace shiftsplit

#endif  // SHIFTSPLIT_KRYLOV_HPP
