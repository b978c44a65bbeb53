#include "shiftsplit/preconditioners.hpp"

#include <string>

#include "shiftsplit/errors.hpp"

namespace shiftsplit {

std::string_view to_string(PrecondKind k) {
  switch (k) {
    case PrecondKind::ss:
      return "SS";
    case PrecondKind::rss:
      return "RSS";
    case PrecondKind::ppss:
      return "PPSS";
    case PrecondKind::aug:
      return "Aug";
  }
  return "?";
}

std::string_view to_string(InnerPolicy p) {
  switch (p) {
    case InnerPolicy::auto_select:
      return "auto";
    case InnerPolicy::cg:
      return "cg";
    case InnerPolicy::gmres10:
      return "gmres10";
    case InnerPolicy::direct:
      return "direct";
  }
  return "?";
}

std::string_view to_string(InnerSolver s) {
  switch (s) {
    case InnerSolver::cg:
      return "cg";
    case InnerSolver::gmres10:
      return "gmres10";
    case InnerSolver::direct:
      return "direct";
  }
  return "?";
}

std::optional<PrecondKind> parse_precond_kind(std::string_view s) {
  if (s == "ss") return PrecondKind::ss;
  if (s == "rss") return PrecondKind::rss;
  if (s == "ppss") return PrecondKind::ppss;
  if (s == "aug") return PrecondKind::aug;
  return std::nullopt;
}

std::optional<InnerPolicy> parse_inner_policy(std::string_view s) {
  if (s == "auto") return InnerPolicy::auto_select;
  if (s == "cg") return InnerPolicy::cg;
  if (s == "gmres10") return InnerPolicy::gmres10;
  if (s == "direct") return InnerPolicy::direct;
  return std::nullopt;
}

void PrecondSpec::validate() const {
  if (!(alpha > 0.0)) {
    throw ConfigError("preconditioner parameter alpha must be positive, got " +
                      std::to_string(alpha));
  }
  inner.rule.validate();
}

// ---------------------------------------------------------------------------

SchurOperator::SchurOperator(const SaddleSystem& sys, double alpha,
                             Variant variant)
    : sys_(&sys), alpha_(alpha), variant_(variant) {
  if (!(alpha > 0.0)) throw ConfigError("SchurOperator: alpha must be positive");
}

void SchurOperator::apply(std::span<const double> x, std::span<double> y) const {
  const std::size_t n = sys_->n();
  if (x.size() != n || y.size() != n) {
    throw DimensionError("SchurOperator: length mismatch");
  }
  Vector cx(sys_->m());
  sys_->C().multiply(x, cx);
  sys_->Bt().multiply(cx, y);
  const double inv = 1.0 / alpha_;
  for (auto& v : y) v *= inv;
  if (variant_ != Variant::shift_only) sys_->A().multiply_add(x, y);
  if (variant_ != Variant::unshifted) axpy(alpha_, x, y);
}

LinearOperator SchurOperator::as_operator() const {
  return {size(), size(),
          [this](std::span<const double> x, std::span<double> y) { apply(x, y); },
          {}};
}

DenseMatrix SchurOperator::assemble_dense() const {
  if (sys_->order() > kDeskScale) {
    throw ConfigError("Schur operator of order " + std::to_string(size()) +
                      " is beyond desk scale");
  }
  const std::size_t n = size();
  DenseMatrix s(n, n);
  Vector e(n, 0.0), col(n);
  for (std::size_t j = 0; j < n; ++j) {
    e[j] = 1.0;
    apply(e, col);
    s.set_column(j, col);
    e[j] = 0.0;
  }
  return s;
}

InnerSolver select_inner(const SaddleSystem& sys, const PrecondSpec& spec) {
  switch (spec.inner.policy) {
    case InnerPolicy::cg:
      return InnerSolver::cg;
    case InnerPolicy::gmres10:
      return InnerSolver::gmres10;
    case InnerPolicy::direct:
      if (sys.order() > kDeskScale) {
        throw ConfigError("direct inner solves refused: order " +
                          std::to_string(sys.order()) + " exceeds " +
                          std::to_string(kDeskScale));
      }
      return InnerSolver::direct;
    case InnerPolicy::auto_select:
      break;
  }
  const auto k = sys.c_equals_kB();
  return (k && *k > 0.0) ? InnerSolver::cg : InnerSolver::gmres10;
}

// ---------------------------------------------------------------------------

struct Preconditioner::Stage {
  LinearOperator op;
  InnerSolver solver;
  std::optional<LuFactorization> lu;
};

Preconditioner::Preconditioner(const SaddleSystem& sys, PrecondSpec spec)
    : sys_(&sys), spec_(spec) {
  spec_.validate();
  schur_solver_ = select_inner(sys, spec_);
  const double alpha = spec_.alpha;

  SchurOperator::Variant variant = SchurOperator::Variant::shifted;
  switch (spec_.kind) {
    case PrecondKind::ss:
      variant = SchurOperator::Variant::shifted;
      break;
    case PrecondKind::rss:
    case PrecondKind::aug:
      variant = SchurOperator::Variant::unshifted;
      break;
    case PrecondKind::ppss:
      variant = SchurOperator::Variant::shift_only;
      break;
  }

  // The SchurOperator is captured by value inside the stage's operator.
  const SchurOperator schur(sys, alpha, variant);
  schur_ = std::make_unique<Stage>();
  schur_->solver = schur_solver_;
  schur_->op = {schur.size(), schur.size(),
                [schur](std::span<const double> x, std::span<double> y) {
                  schur.apply(x, y);
                },
                {}};
  if (schur_solver_ == InnerSolver::direct) {
    schur_->lu.emplace(schur.assemble_dense());
  }

  if (spec_.kind == PrecondKind::ppss) {
    // alpha I + A is SPD, so CG under auto_select regardless of C.
    shifted_a_ = std::make_unique<Stage>();
    switch (spec_.inner.policy) {
      case InnerPolicy::auto_select:
      case InnerPolicy::cg:
        shifted_a_->solver = InnerSolver::cg;
        break;
      case InnerPolicy::gmres10:
        shifted_a_->solver = InnerSolver::gmres10;
        break;
      case InnerPolicy::direct:
        shifted_a_->solver = InnerSolver::direct;
        break;
    }
    const SparseMatrix* a = &sys.A();
    shifted_a_->op = {sys.n(), sys.n(),
                      [a, alpha](std::span<const double> x, std::span<double> y) {
                        a->multiply(x, y);
                        axpy(alpha, x, y);
                      },
                      {}};
    if (shifted_a_->solver == InnerSolver::direct) {
      DenseMatrix d = DenseMatrix::from_sparse(sys.A());
      for (std::size_t i = 0; i < sys.n(); ++i) d(i, i) += alpha;
      shifted_a_->lu.emplace(std::move(d));
    }
  }
}

Preconditioner::~Preconditioner() = default;
Preconditioner::Preconditioner(Preconditioner&&) noexcept = default;
Preconditioner& Preconditioner::operator=(Preconditioner&&) noexcept = default;

PrecondOutcome Preconditioner::solve_stage(const Stage& stage,
                                           std::span<const double> rhs,
                                           std::span<double> x) const {
  PrecondOutcome out;
  switch (stage.solver) {
    case InnerSolver::direct: {
      const Vector sol = stage.lu->solve(rhs);
      std::copy(sol.begin(), sol.end(), x.begin());
      return out;
    }
    case InnerSolver::cg: {
      const auto rep = cg(stage.op, rhs, spec_.inner.rule.inner());
      std::copy(rep.final_solution.begin(), rep.final_solution.end(), x.begin());
      out.inner_iterations = rep.iterations;
      out.inner_converged = rep.converged;
      return out;
    }
    case InnerSolver::gmres10: {
      const auto rep = gmres(stage.op, rhs, 10, spec_.inner.rule.inner());
      std::copy(rep.final_solution.begin(), rep.final_solution.end(), x.begin());
      out.inner_iterations = rep.iterations;
      out.inner_converged = rep.converged;
      return out;
    }
  }
  return out;
}

PrecondOutcome Preconditioner::apply(std::span<const double> r,
                                     std::span<double> z) const {
  const std::size_t order = sys_->order();
  if (r.size() != order || z.size() != order) {
    throw DimensionError("preconditioner apply: expected length " +
                         std::to_string(order));
  }
  PrecondOutcome out = apply_once(r, z);
  if (spec_.inner.policy != InnerPolicy::direct) return out;

  // The product form of P_PPSS amplifies the rounding of its second stage
  // by ||alpha I + A|| / alpha; one refinement step removes it.
  Vector res(order);
  multiply(z, res);
  for (std::size_t i = 0; i < order; ++i) res[i] = r[i] - res[i];
  Vector dz(order);
  apply_once(res, dz);
  for (std::size_t i = 0; i < order; ++i) z[i] += dz[i];
  return out;
}

void Preconditioner::multiply(std::span<const double> z,
                              std::span<double> y) const {
  const std::size_t n = sys_->n();
  const std::size_t m = sys_->m();
  const double alpha = spec_.alpha;
  const auto z1 = z.first(n);
  const auto z2 = z.subspan(n, m);
  auto y1 = y.first(n);
  auto y2 = y.subspan(n, m);
  Vector cz(m);
  sys_->C().multiply(z1, cz);

  switch (spec_.kind) {
    case PrecondKind::ss:
    case PrecondKind::rss: {
      // [A + shift I, B^T; -C, alpha I]
      sys_->A().multiply(z1, y1);
      if (spec_.kind == PrecondKind::ss) axpy(alpha, z1, y1);
      sys_->Bt().multiply_add(z2, y1);
      for (std::size_t i = 0; i < m; ++i) y2[i] = alpha * z2[i] - cz[i];
      return;
    }
    case PrecondKind::aug: {
      // [A + (1/alpha) B^T C, B^T; 0, alpha I]
      sys_->A().multiply(z1, y1);
      sys_->Bt().multiply_add(cz, y1, 1.0 / alpha);
      sys_->Bt().multiply_add(z2, y1);
      for (std::size_t i = 0; i < m; ++i) y2[i] = alpha * z2[i];
      return;
    }
    case PrecondKind::ppss: {
      // (1/(2 alpha)) (alpha I + H) (alpha I + S) z
      Vector u1(z1.begin(), z1.end());
      for (auto& v : u1) v *= alpha;
      sys_->Bt().multiply_add(z2, u1);
      sys_->A().multiply(u1, y1);
      axpy(alpha, u1, y1);
      const double f = 1.0 / (2.0 * alpha);
      for (auto& v : y1) v *= f;
      for (std::size_t i = 0; i < m; ++i) {
        y2[i] = f * alpha * (alpha * z2[i] - cz[i]);
      }
      return;
    }
  }
}

PrecondOutcome Preconditioner::apply_once(std::span<const double> r,
                                          std::span<double> z) const {
  const std::size_t n = sys_->n();
  const std::size_t m = sys_->m();
  const double alpha = spec_.alpha;
  const double inv = 1.0 / alpha;
  const auto r1 = r.first(n);
  const auto r2 = r.subspan(n, m);
  auto z1 = z.first(n);
  auto z2 = z.subspan(n, m);

  PrecondOutcome total;
  auto accumulate = [&total](const PrecondOutcome& o) {
    total.inner_iterations += o.inner_iterations;
    total.inner_converged = total.inner_converged && o.inner_converged;
  };

  Vector t(n);
  switch (spec_.kind) {
    case PrecondKind::ss:
    case PrecondKind::rss: {
      // t = r1 - (1/alpha) B^T r2;  S z1 = t;  z2 = (C z1 + r2) / alpha
      sys_->Bt().multiply(r2, t);
      for (std::size_t i = 0; i < n; ++i) t[i] = r1[i] - inv * t[i];
      accumulate(solve_stage(*schur_, t, z1));
      sys_->C().multiply(z1, z2);
      for (std::size_t i = 0; i < m; ++i) z2[i] = inv * (z2[i] + r2[i]);
      break;
    }
    case PrecondKind::aug: {
      // z2 = r2 / alpha;  (A + (1/alpha) B^T C) z1 = r1 - B^T z2
      for (std::size_t i = 0; i < m; ++i) z2[i] = inv * r2[i];
      sys_->Bt().multiply(z2, t);
      for (std::size_t i = 0; i < n; ++i) t[i] = r1[i] - t[i];
      accumulate(solve_stage(*schur_, t, z1));
      break;
    }
    case PrecondKind::ppss: {
      // (alpha I + H) w = r, then (alpha I + S) z = w, then z *= 2 alpha.
      Vector w1(n);
      accumulate(solve_stage(*shifted_a_, r1, w1));
      Vector w2(m);
      for (std::size_t i = 0; i < m; ++i) w2[i] = inv * r2[i];
      sys_->Bt().multiply(w2, t);
      for (std::size_t i = 0; i < n; ++i) t[i] = w1[i] - inv * t[i];
      accumulate(solve_stage(*schur_, t, z1));
      sys_->C().multiply(z1, z2);
      for (std::size_t i = 0; i < m; ++i) z2[i] = inv * (w2[i] + z2[i]);
      for (auto& v : z) v *= 2.0 * alpha;
      break;
    }
  }
  return total;
}

Vector Preconditioner::apply(std::span<const double> r) const {
  Vector z(r.size());
  apply(r, z);
  return z;
}

PrecondApply Preconditioner::as_apply() const {
  return [this](std::span<const double> r, std::span<double> z) {
    return apply(r, z);
  };
}

namespace {

Vector apply_kind(const SaddleSystem& sys, PrecondKind kind, double alpha,
                  const InnerSpec& inner, std::span<const double> r) {
  return Preconditioner(sys, PrecondSpec{kind, alpha, inner}).apply(r);
}

}  // namespace

Vector apply_ss(const SaddleSystem& sys, double alpha, const InnerSpec& inner,
                std::span<const double> r) {
  return apply_kind(sys, PrecondKind::ss, alpha, inner, r);
}

Vector apply_rss(const SaddleSystem& sys, double alpha, const InnerSpec& inner,
                 std::span<const double> r) {
  return apply_kind(sys, PrecondKind::rss, alpha, inner, r);
}

Vector apply_ppss(const SaddleSystem& sys, double alpha, const InnerSpec& inner,
                  std::span<const double> r) {
  return apply_kind(sys, PrecondKind::ppss, alpha, inner, r);
}

Vector apply_aug(const SaddleSystem& sys, double alpha, const InnerSpec& inner,
                 std::span<const double> r) {
  return apply_kind(sys, PrecondKind::aug, alpha, inner, r);
}

}  // namespace shiftsplit
