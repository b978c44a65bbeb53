#include "shiftsplit/ss_iteration.hpp"

#include <chrono>
#include <cmath>
#include <string>

#include "shiftsplit/errors.hpp"

namespace shiftsplit {

SolveReport ss_solve(const SaddleSystem& sys, std::span<const double> f,
                     double alpha, const StoppingRule& rule,
                     const InnerSpec& inner, std::span<const double> x0) {
  const auto t0 = std::chrono::steady_clock::now();
  rule.validate();
  const std::size_t order = sys.order();
  if (f.size() != order || (!x0.empty() && x0.size() != order)) {
    throw DimensionError("ss_solve: vector length mismatch");
  }
  const Preconditioner shift(sys, PrecondSpec{PrecondKind::ss, alpha, inner});

  SolveReport rep;
  Vector x = x0.empty() ? Vector(order, 0.0) : Vector(x0.begin(), x0.end());
  Vector r(order), z(order);
  const double fnorm = norm2(f);
  const double denom = fnorm == 0.0 ? 1.0 : fnorm;

  auto update_residual = [&] {
    block_apply(sys, x, r);
    for (std::size_t i = 0; i < order; ++i) r[i] = f[i] - r[i];
    rep.relative_residuals.push_back(norm2(r) / denom);
  };
  update_residual();

  while (true) {
    const double rk = rep.relative_residuals.back();
    if (rk <= rule.rel_tol) {
      rep.converged = true;
      rep.status = SolveStatus::converged;
      break;
    }
    if (!(rk <= kDivergenceThreshold)) {
      rep.status = SolveStatus::diverged;
      break;
    }
    if (rep.iterations >= rule.max_outer) {
      rep.status = SolveStatus::max_iterations;
      break;
    }
    const PrecondOutcome out = shift.apply(r, z);
    rep.inner_iterations_total += out.inner_iterations;
    if (!out.inner_converged) ++rep.inner_failures;
    axpy(2.0, z, x);
    ++rep.iterations;
    update_residual();
  }
  rep.final_solution = std::move(x);
  rep.wall_seconds = std::chrono::duration<double>(
                         std::chrono::steady_clock::now() - t0)
                         .count();
  return rep;
}

DenseMatrix iteration_matrix(const SaddleSystem& sys, double alpha) {
  if (!(alpha > 0.0)) throw ConfigError("iteration_matrix: alpha must be positive");
  if (sys.order() > kDeskScale) {
    throw ConfigError("iteration_matrix: order " + std::to_string(sys.order()) +
                      " exceeds desk scale");
  }
  const DenseMatrix a = dense_block_matrix(sys);
  const std::size_t order = a.rows();
  DenseMatrix plus = a;
  DenseMatrix minus = -1.0 * a;
  for (std::size_t i = 0; i < order; ++i) {
    plus(i, i) += alpha;
    minus(i, i) += alpha;
  }
  const LuFactorization lu(std::move(plus));
  DenseMatrix m(order, order);
  for (std::size_t j = 0; j < order; ++j) {
    m.set_column(j, lu.solve(minus.column(j)));
  }
  return m;
}

std::pair<Complex, Complex> eigen_quadratic(double alpha, double a, double s,
                                            double t) {
  const Complex bt(s, t);
  const double a2 = alpha * alpha;
  const Complex den = a2 + alpha * a + bt;
  return {2.0 * (bt - a2) / den, (a2 - alpha * a + bt) / den};
}

bool SSConvergenceReport::all_conditions_hold() const {
  for (const auto& e : eigdata) {
    if (!e.condition_holds) return false;
  }
  return true;
}

SSConvergenceReport analyze_convergence(const SaddleSystem& sys, double alpha) {
  const DenseMatrix m = iteration_matrix(sys, alpha);
  const ComplexList lambdas = eigvals(m);
  const std::size_t n = sys.n();
  const std::size_t nm = sys.m();

  SSConvergenceReport rep;
  rep.alpha = alpha;
  rep.theorem2_applicable = sys.c_equals_kB().has_value();
  rep.eigdata.reserve(lambdas.size());

  ComplexVector ax(n), bx(nm), cx(nm);
  for (const Complex& lambda : lambdas) {
    rep.spectral_radius = std::max(rep.spectral_radius, std::abs(lambda));

    EigenData e;
    e.lambda = lambda;
    e.eigenvector = inverse_iteration(m, lambda);
    double xnorm = 0.0;
    for (std::size_t i = 0; i < n; ++i) xnorm += std::norm(e.eigenvector[i]);
    xnorm = std::sqrt(xnorm);
    if (xnorm > 0.0) {
      for (auto& v : e.eigenvector) v /= xnorm;
    }
    const std::span<const Complex> x(e.eigenvector.data(), n);

    // Real sparse matrices applied to complex vectors, entry by entry.
    auto apply_real = [](const SparseMatrix& mat, std::span<const Complex> v,
                         ComplexVector& out) {
      const auto ro = mat.row_offsets();
      for (std::size_t i = 0; i < mat.rows(); ++i) {
        Complex acc = 0.0;
        for (std::size_t k = ro[i]; k < ro[i + 1]; ++k) {
          acc += mat.values()[k] * v[mat.col_indices()[k]];
        }
        out[i] = acc;
      }
    };
    apply_real(sys.A(), x, ax);
    apply_real(sys.B(), x, bx);
    apply_real(sys.C(), x, cx);
    Complex xax = 0.0, xbtcx = 0.0;
    for (std::size_t i = 0; i < n; ++i) xax += std::conj(x[i]) * ax[i];
    for (std::size_t i = 0; i < nm; ++i) xbtcx += std::conj(bx[i]) * cx[i];
    e.a = xax.real();
    e.s = xbtcx.real();
    e.t = xbtcx.imag();
    e.condition_holds = e.s > 0.0 && std::abs(e.t) < e.a * std::sqrt(e.s);

    const Complex lm1 = lambda - 1.0;
    const Complex lp1 = lambda + 1.0;
    e.quadratic_residual = std::abs(alpha * alpha * lm1 * lm1 +
                                    alpha * (lambda * lambda - 1.0) * e.a +
                                    lp1 * lp1 * Complex(e.s, e.t));
    rep.eigdata.push_back(std::move(e));
  }
  return rep;
}

bool check_lemma56(const ComplexList& eigenvalues) {
  for (const Complex& l : eigenvalues) {
    if (std::abs(l - 1.0) <= 1e-8 || std::abs(l + 1.0) <= 1e-8) return false;
  }
  return true;
}

bool check_lemma56(const SSConvergenceReport& report) {
  ComplexList l;
  l.reserve(report.eigdata.size());
  for (const auto& e : report.eigdata) l.push_back(e.lambda);
  return check_lemma56(l);
}

}  // namespace shiftsplit
