#ifndef SHIFTSPLIT_EXPERIMENT_HPP
#define SHIFTSPLIT_EXPERIMENT_HPP

#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "shiftsplit/krylov.hpp"
#include "shiftsplit/preconditioners.hpp"
#include "shiftsplit/saddle.hpp"

namespace shiftsplit {

struct StokesProblem {
  std::size_t s = 16;
  double mu = 1.0;
  double k = 2.0;
};

struct ExternalProblem {
  std::filesystem::path path;
  std::size_t n = 0;
  std::size_t m = 0;
};

using Problem = std::variant<StokesProblem, ExternalProblem>;

struct AlphaFixed {
  double value = 1.0;
};
struct AlphaEst {};
struct AlphaSweep {
  std::vector<double> values;
};

using AlphaMode = std::variant<AlphaFixed, AlphaEst, AlphaSweep>;

struct ExperimentConfig {
  Problem problem = StokesProblem{};
  /// nullopt runs unpreconditioned (unrestarted) GMRES.
  std::optional<PrecondKind> preconditioner;
  InnerPolicy inner_policy = InnerPolicy::auto_select;
  AlphaMode alpha_mode = AlphaFixed{};
  StoppingRule rule;

  /// Throws ConfigError on an empty sweep, non-positive alpha or bad rule.
  void validate() const;
};

struct TableRow {
  std::string label;
  double alpha_used = 0.0;
  std::size_t iters = 0;
  double cpu_seconds = 0.0;
  /// Recomputed from scratch as ||f - A x|| / ||f||.
  double final_rk = 0.0;
  /// Final relative residual as tracked inside the solver.
  double reported_rk = 0.0;
  bool converged = false;
  std::size_t inner_iterations = 0;
  /// Marks the row with the least solve time in a sweep.
  bool fastest = false;
};

SaddleSystem build_problem(const Problem& problem);

/// Builds f = A_s * ones and runs FGMRES (plain GMRES without a
/// preconditioner), one row per alpha value. Non-convergence yields a row
/// with converged = false rather than an error.
std::vector<TableRow> run_experiment(const ExperimentConfig& cfg);
std::vector<TableRow> run_experiment(const ExperimentConfig& cfg,
                                     const SaddleSystem& sys);

/// run_experiment plus the `fastest` flag on the minimum-time row.
std::vector<TableRow> sweep_alpha(const ExperimentConfig& cfg);
std::vector<TableRow> sweep_alpha(const ExperimentConfig& cfg,
                                  const SaddleSystem& sys);

enum class TableFormat { markdown, csv };

/// Columns: label, alpha, iters, cpu, Rk, converged.
std::string emit_table(const std::vector<TableRow>& rows, TableFormat format);

/// Residual in the one-decimal scientific style, e.g. "8.4e-8".
std::string format_rk(double rk);

struct ProblemStats {
  std::size_t n = 0;
  std::size_t m = 0;
  std::size_t nnz_a = 0;
  std::size_t nnz_b = 0;
  std::size_t nnz_c = 0;
};

ProblemStats problem_stats(const SaddleSystem& sys);
std::string emit_stats(const ProblemStats& stats, TableFormat format);

}  // namespace shiftsplit

#endif  // SHIFTSPLIT_EXPERIMENT_HPP
