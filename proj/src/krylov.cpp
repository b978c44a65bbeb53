#include "shiftsplit/krylov.hpp"

#include <chrono>
#include <cmath>
#include <string>

#include "shiftsplit/dense.hpp"
#include "shiftsplit/errors.hpp"

namespace shiftsplit {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void check_square(const LinearOperator& op, std::span<const double> b,
                  std::span<const double> x0, const char* who) {
  if (op.rows != op.cols) {
    throw DimensionError(std::string(who) + ": operator must be square");
  }
  if (b.size() != op.rows || (!x0.empty() && x0.size() != op.rows)) {
    throw DimensionError(std::string(who) + ": vector length mismatch");
  }
}

Vector initial_guess(std::span<const double> x0, std::size_t n) {
  return x0.empty() ? Vector(n, 0.0) : Vector(x0.begin(), x0.end());
}

Vector residual(const LinearOperator& op, std::span<const double> b,
                std::span<const double> x) {
  Vector r(op.rows);
  op.apply(x, r);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = b[i] - r[i];
  return r;
}

struct Givens {
  double c = 1.0;
  double s = 0.0;

  static Givens zeroing(double a, double b) {
    if (b == 0.0) return {1.0, 0.0};
    if (std::abs(b) > std::abs(a)) {
      const double t = a / b;
      const double s = 1.0 / std::sqrt(1.0 + t * t);
      return {s * t, s};
    }
    const double t = b / a;
    const double c = 1.0 / std::sqrt(1.0 + t * t);
    return {c, c * t};
  }

  void apply(double& x, double& y) const {
    const double tx = c * x + s * y;
    y = -s * x + c * y;
    x = tx;
  }
};

/// Arnoldi cycle shared by GMRES and FGMRES. With `precond` empty the basis
/// itself is used as search space; otherwise the preconditioned vectors
/// z_j = P^{-1} v_j are kept and the update is x += Z y.
class ArnoldiCycle {
 public:
  ArnoldiCycle(const LinearOperator& op, const PrecondApply* precond,
               std::size_t max_dim)
      : op_(op), precond_(precond), h_(max_dim + 1, max_dim), g_(max_dim + 1),
        rot_(max_dim) {}

  struct Result {
    std::size_t steps = 0;
    bool converged_estimate = false;
    bool happy_breakdown = false;
  };

  /// Runs up to `budget` steps from residual r (norm beta). Pushes one
  /// relative residual estimate per step into `history`.
  Result run(const Vector& r, double beta, double bnorm, double tol,
             std::size_t budget, std::vector<double>& history,
             SolveReport& report) {
    const std::size_t n = op_.rows;
    basis_.clear();
    search_.clear();
    std::fill(g_.begin(), g_.end(), 0.0);
    basis_.emplace_back(r);
    for (auto& v : basis_.back()) v /= beta;
    g_[0] = beta;

    Result res;
    Vector w(n);
    for (std::size_t j = 0; j < budget; ++j) {
      const Vector* dir = &basis_[j];
      if (precond_ != nullptr) {
        Vector z(n, 0.0);
        const PrecondOutcome out = (*precond_)(basis_[j], z);
        report.inner_iterations_total += out.inner_iterations;
        if (!out.inner_converged) ++report.inner_failures;
        search_.push_back(std::move(z));
        dir = &search_.back();
      }
      op_.apply(*dir, w);
      const double wnorm = norm2(w);

      // Modified Gram-Schmidt.
      for (std::size_t i = 0; i <= j; ++i) {
        const double hij = dot(w, basis_[i]);
        h_(i, j) = hij;
        axpy(-hij, basis_[i], w);
      }
      const double hnext = norm2(w);
      h_(j + 1, j) = hnext;

      for (std::size_t i = 0; i < j; ++i) rot_[i].apply(h_(i, j), h_(i + 1, j));
      rot_[j] = Givens::zeroing(h_(j, j), h_(j + 1, j));
      rot_[j].apply(h_(j, j), h_(j + 1, j));
      h_(j + 1, j) = 0.0;
      rot_[j].apply(g_[j], g_[j + 1]);

      res.steps = j + 1;
      history.push_back(std::abs(g_[j + 1]) / bnorm);
      if (history.back() <= tol) {
        res.converged_estimate = true;
        break;
      }
      if (hnext <= 1e-14 * wnorm || hnext == 0.0) {
        res.happy_breakdown = true;
        break;
      }
      basis_.emplace_back(w);
      for (auto& v : basis_.back()) v /= hnext;
    }
    return res;
  }

  /// x += (basis or search space) * y, with H y = g solved on `steps` columns.
  void update(std::size_t steps, Vector& x) const {
    Vector y(steps);
    for (std::size_t i = steps; i-- > 0;) {
      double s = g_[i];
      for (std::size_t k = i + 1; k < steps; ++k) s -= h_(i, k) * y[k];
      y[i] = s / h_(i, i);
    }
    const auto& space = precond_ != nullptr ? search_ : basis_;
    for (std::size_t i = 0; i < steps; ++i) axpy(y[i], space[i], x);
  }

 private:
  const LinearOperator& op_;
  const PrecondApply* precond_;
  DenseMatrix h_;
  Vector g_;
  std::vector<Givens> rot_;
  std::vector<Vector> basis_;
  std::vector<Vector> search_;
};

SolveReport gmres_driver(const LinearOperator& op, std::span<const double> b,
                         const PrecondApply* precond, std::size_t restart,
                         const StoppingRule& rule, std::span<const double> x0,
                         const char* who) {
  const auto t0 = Clock::now();
  check_square(op, b, x0, who);
  SolveReport rep;
  Vector x = initial_guess(x0, op.rows);

  const double bnorm = norm2(b);
  if (bnorm == 0.0) {
    rep.converged = true;
    rep.status = SolveStatus::converged;
    rep.relative_residuals.push_back(0.0);
    rep.final_solution.assign(op.rows, 0.0);
    rep.wall_seconds = seconds_since(t0);
    return rep;
  }

  Vector r = residual(op, b, x);
  double beta = norm2(r);
  rep.relative_residuals.push_back(beta / bnorm);
  const std::size_t cycle_len = restart == 0 ? rule.max_outer : restart;
  ArnoldiCycle cycle(op, precond, std::max<std::size_t>(cycle_len, 1));

  while (true) {
    if (beta / bnorm <= rule.rel_tol) {
      rep.converged = true;
      rep.status = SolveStatus::converged;
      break;
    }
    if (rep.iterations >= rule.max_outer) {
      rep.status = SolveStatus::max_iterations;
      break;
    }
    const std::size_t budget = std::min(cycle_len, rule.max_outer - rep.iterations);
    const double cycle_start = beta;
    const auto res = cycle.run(r, beta, bnorm, rule.rel_tol, budget,
                               rep.relative_residuals, rep);
    rep.iterations += res.steps;
    cycle.update(res.steps, x);

    // Re-verify with the true residual at the end of every cycle.
    r = residual(op, b, x);
    beta = norm2(r);
    rep.relative_residuals.back() = beta / bnorm;
    if (beta / bnorm <= rule.rel_tol) continue;
    if (cycle_start - beta < 1e-14 * cycle_start) {
      rep.status = SolveStatus::stagnation;
      break;
    }
  }
  rep.final_solution = std::move(x);
  rep.wall_seconds = seconds_since(t0);
  return rep;
}

}  // namespace

void StoppingRule::validate() const {
  if (!(rel_tol > 0.0) || !(rel_tol < 1.0)) {
    throw ConfigError("stopping rule: rel_tol must lie in (0, 1)");
  }
  if (!(inner_reduction > 0.0) || max_outer == 0 || max_inner == 0) {
    throw ConfigError("stopping rule: all fields must be positive");
  }
}

std::string_view to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::converged:
      return "converged";
    case SolveStatus::max_iterations:
      return "max-iterations";
    case SolveStatus::breakdown:
      return "breakdown";
    case SolveStatus::stagnation:
      return "stagnation";
    case SolveStatus::diverged:
      return "diverged";
  }
  return "unknown";
}

double relative_residual(const LinearOperator& op, std::span<const double> b,
                         std::span<const double> x) {
  const double bnorm = norm2(b);
  const double rnorm = norm2(residual(op, b, x));
  return bnorm == 0.0 ? rnorm : rnorm / bnorm;
}

SolveReport cg(const LinearOperator& op, std::span<const double> b,
               const StoppingRule& rule, std::span<const double> x0) {
  const auto t0 = Clock::now();
  check_square(op, b, x0, "cg");
  SolveReport rep;
  Vector x = initial_guess(x0, op.rows);
  const double bnorm = norm2(b);
  if (bnorm == 0.0) {
    rep.converged = true;
    rep.status = SolveStatus::converged;
    rep.relative_residuals.push_back(0.0);
    rep.final_solution.assign(op.rows, 0.0);
    rep.wall_seconds = seconds_since(t0);
    return rep;
  }

  Vector r = residual(op, b, x);
  Vector p = r;
  Vector ap(op.rows);
  double rr = dot(r, r);
  rep.relative_residuals.push_back(std::sqrt(rr) / bnorm);

  while (true) {
    if (rep.relative_residuals.back() <= rule.rel_tol) {
      rep.converged = true;
      rep.status = SolveStatus::converged;
      break;
    }
    if (rep.iterations >= rule.max_outer) {
      rep.status = SolveStatus::max_iterations;
      break;
    }
    op.apply(p, ap);
    const double pap = dot(p, ap);
    if (!(pap > 0.0)) {
      rep.status = SolveStatus::breakdown;
      break;
    }
    const double step = rr / pap;
    axpy(step, p, x);
    axpy(-step, ap, r);
    const double rr_new = dot(r, r);
    ++rep.iterations;
    rep.relative_residuals.push_back(std::sqrt(rr_new) / bnorm);
    const double beta = rr_new / rr;
    rr = rr_new;
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = r[i] + beta * p[i];
  }
  rep.final_solution = std::move(x);
  rep.wall_seconds = seconds_since(t0);
  return rep;
}

SolveReport gmres(const LinearOperator& op, std::span<const double> b,
                  std::size_t restart, const StoppingRule& rule,
                  std::span<const double> x0) {
  return gmres_driver(op, b, nullptr, restart, rule, x0, "gmres");
}

SolveReport fgmres(const LinearOperator& op, std::span<const double> b,
                   const PrecondApply& precond, const StoppingRule& rule,
                   std::span<const double> x0, std::size_t restart) {
  if (!precond) throw ConfigError("fgmres: preconditioner is empty");
  return gmres_driver(op, b, &precond, restart, rule, x0, "fgmres");
}

}  // namespace shiftsplit
