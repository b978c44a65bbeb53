#ifndef SHIFTSPLIT_SS_ITERATION_HPP
#define SHIFTSPLIT_SS_ITERATION_HPP

#include <vector>

#include "shiftsplit/dense.hpp"
#include "shiftsplit/krylov.hpp"
#include "shiftsplit/preconditioners.hpp"
#include "shiftsplit/saddle.hpp"

namespace shiftsplit {

/// Relative residual above which the stationary iteration is declared
/// divergent.
inline constexpr double kDivergenceThreshold = 1e6;

/// Stationary shift-splitting iteration
///     (alpha I + A_s) x_{k+1} = (alpha I - A_s) x_k + 2 f,
/// run in the update form x_{k+1} = x_k + 2 (alpha I + A_s)^{-1} (f - A_s x_k).
/// Iterations start from x0 (zero when empty).
SolveReport ss_solve(const SaddleSystem& sys, std::span<const double> f,
                     double alpha, const StoppingRule& rule,
                     const InnerSpec& inner, std::span<const double> x0 = {});

/// M_alpha = (alpha I + A_s)^{-1} (alpha I - A_s), assembled densely.
DenseMatrix iteration_matrix(const SaddleSystem& sys, double alpha);

struct EigenData {
  Complex lambda;
  double a = 0.0;  // x* A x
  double s = 0.0;  // Re(x^H B^T C x)
  double t = 0.0;  // Im(x^H B^T C x)
  bool condition_holds = false;  // s > 0 and |t| < a sqrt(s)
  /// |alpha^2 (l-1)^2 + alpha (l^2-1) a + (l+1)^2 (s + t i)|
  double quadratic_residual = 0.0;
  /// Eigenvector of M_alpha, velocity part scaled to unit 2-norm.
  ComplexVector eigenvector;
};

struct SSConvergenceReport {
  double alpha = 0.0;
  double spectral_radius = 0.0;
  std::vector<EigenData> eigdata;
  bool theorem2_applicable = false;

  /// True when every eigenpair satisfies the Theorem-1 type inequality.
  bool all_conditions_hold() const;
};

/// Eigen-analysis of M_alpha with a, s, t evaluated on each eigenvector.
SSConvergenceReport analyze_convergence(const SaddleSystem& sys, double alpha);

/// No eigenvalue within 1e-8 of +1 or -1.
bool check_lemma56(const SSConvergenceReport& report);
bool check_lemma56(const ComplexList& eigenvalues);

/// Coefficients (phi, psi) of lambda^2 + phi lambda + psi = 0 for given
/// alpha, a, s, t (the form with a plus sign on the linear term).
std::pair<Complex, Complex> eigen_quadratic(double alpha, double a, double s,
                                            double t);

}  // namespace shiftsplit

#endif  // SHIFTSPLIT_SS_ITERATION_HPP
