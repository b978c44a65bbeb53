#include "shiftsplit/experiment.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "shiftsplit/errors.hpp"
#include "shiftsplit/matrix_market.hpp"

namespace shiftsplit {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string format_double(const char* fmt, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

std::vector<double> alpha_values(const ExperimentConfig& cfg,
                                 const SaddleSystem& sys) {
  return std::visit(
      overloaded{
          [](const AlphaFixed& f) { return std::vector<double>{f.value}; },
          [&sys](const AlphaEst&) {
            return std::vector<double>{alpha_est(sys).alpha};
          },
          [](const AlphaSweep& s) { return s.values; },
      },
      cfg.alpha_mode);
}

}  // namespace

void ExperimentConfig::validate() const {
  rule.validate();
  if (const auto* sweep = std::get_if<AlphaSweep>(&alpha_mode)) {
    if (sweep->values.empty()) throw ConfigError("alpha sweep list is empty");
    for (const double a : sweep->values) {
      if (!(a > 0.0)) throw ConfigError("alpha values must be positive");
    }
  }
  if (const auto* fixed = std::get_if<AlphaFixed>(&alpha_mode)) {
    if (!(fixed->value > 0.0)) throw ConfigError("alpha must be positive");
  }
  if (const auto* stokes = std::get_if<StokesProblem>(&problem)) {
    if (stokes->s == 0 || !(stokes->mu > 0.0) || !(stokes->k > 0.0)) {
      throw ConfigError("stokes problem needs s >= 1, mu > 0, k > 0");
    }
  }
}

SaddleSystem build_problem(const Problem& problem) {
  return std::visit(
      overloaded{
          [](const StokesProblem& p) { return build_stokes(p.s, p.mu, p.k); },
          [](const ExternalProblem& p) {
            const SparseMatrix full = read_matrix_market(p.path);
            if (full.rows() != p.n + p.m) {
              throw ConfigError("external matrix " + p.path.string() +
                                " has order " + std::to_string(full.rows()) +
                                " but n+m = " + std::to_string(p.n + p.m));
            }
            return split_external(full, p.n, p.m);
          },
      },
      problem);
}

std::vector<TableRow> run_experiment(const ExperimentConfig& cfg,
                                     const SaddleSystem& sys) {
  cfg.validate();
  const Vector f = rhs_all_ones(sys);
  const LinearOperator op = block_operator(sys);
  std::vector<TableRow> rows;

  auto finish = [&](TableRow row, const SolveReport& rep) {
    row.iters = rep.iterations;
    row.cpu_seconds = rep.wall_seconds;
    row.inner_iterations = rep.inner_iterations_total;
    row.final_rk = relative_residual(op, f, rep.final_solution);
    row.reported_rk = rep.final_relative_residual();
    row.converged = rep.converged && row.final_rk <= cfg.rule.rel_tol;
    rows.push_back(std::move(row));
  };

  if (!cfg.preconditioner) {
    TableRow row;
    row.label = "No Prec.";
    finish(std::move(row), gmres(op, f, 0, cfg.rule));
    return rows;
  }

  for (const double alpha : alpha_values(cfg, sys)) {
    PrecondSpec spec{*cfg.preconditioner, alpha,
                     InnerSpec{cfg.inner_policy, cfg.rule}};
    const Preconditioner p(sys, spec);
    TableRow row;
    row.label = std::string(to_string(*cfg.preconditioner));
    row.alpha_used = alpha;
    finish(std::move(row), fgmres(op, f, p.as_apply(), cfg.rule));
  }
  return rows;
}

std::vector<TableRow> run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const SaddleSystem sys = build_problem(cfg.problem);
  return run_experiment(cfg, sys);
}

std::vector<TableRow> sweep_alpha(const ExperimentConfig& cfg,
                                  const SaddleSystem& sys) {
  auto rows = run_experiment(cfg, sys);
  auto best = rows.end();
  for (auto it = rows.begin(); it != rows.end(); ++it) {
    if (!it->converged) continue;
    if (best == rows.end() || it->cpu_seconds < best->cpu_seconds) best = it;
  }
  if (best != rows.end()) best->fastest = true;
  return rows;
}

std::vector<TableRow> sweep_alpha(const ExperimentConfig& cfg) {
  cfg.validate();
  const SaddleSystem sys = build_problem(cfg.problem);
  return sweep_alpha(cfg, sys);
}

std::string format_rk(double rk) {
  std::string s = format_double("%.1e", rk);
  // Drop the zero padding of the exponent: 8.4e-08 -> 8.4e-8.
  const auto e = s.find('e');
  if (e == std::string::npos || e + 2 > s.size()) return s;
  std::size_t digits = e + 2;
  while (digits + 1 < s.size() && s[digits] == '0') s.erase(digits, 1);
  return s;
}

std::string emit_table(const std::vector<TableRow>& rows, TableFormat format) {
  std::ostringstream out;
  if (format == TableFormat::csv) {
    out << "label,alpha,iters,cpu,Rk,converged\n";
    for (const auto& r : rows) {
      out << r.label << ',' << format_double("%g", r.alpha_used) << ',';
      if (r.converged) out << r.iters;
      out << ',' << format_double("%.2f", r.cpu_seconds) << ','
          << format_rk(r.final_rk) << ',' << (r.converged ? "true" : "false")
          << '\n';
    }
    return out.str();
  }

  out << "| label | alpha | iters | cpu | Rk | converged |\n";
  out << "|---|---|---|---|---|---|\n";
  for (const auto& r : rows) {
    const std::string alpha =
        r.alpha_used > 0.0 ? format_double("%g", r.alpha_used) : "--";
    std::string cpu = format_double("%.2f", r.cpu_seconds);
    if (r.fastest) cpu = "**" + cpu + "**";
    out << "| " << r.label << " | " << alpha << " | "
        << (r.converged ? std::to_string(r.iters) : "†") << " | " << cpu
        << " | " << format_rk(r.final_rk) << " | "
        << (r.converged ? "yes" : "no") << " |\n";
  }
  return out.str();
}

ProblemStats problem_stats(const SaddleSystem& sys) {
  return {sys.n(), sys.m(), sys.A().nnz(), sys.B().nnz(), sys.C().nnz()};
}

std::string emit_stats(const ProblemStats& st, TableFormat format) {
  std::ostringstream out;
  if (format == TableFormat::csv) {
    out << "n,m,nnz_A,nnz_B,nnz_C\n"
        << st.n << ',' << st.m << ',' << st.nnz_a << ',' << st.nnz_b << ','
        << st.nnz_c << '\n';
  } else {
    out << "| n | m | nnz(A) | nnz(B) | nnz(C) |\n|---|---|---|---|---|\n"
        << "| " << st.n << " | " << st.m << " | " << st.nnz_a << " | "
        << st.nnz_b << " | " << st.nnz_c << " |\n";
  }
  return out.str();
}

}  // namespace shiftsplit
