// Command-line harness: builds a saddle point problem, runs (F)GMRES with one
// of the shift-splitting family preconditioners and prints a result table.

#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "shiftsplit/errors.hpp"
#include "shiftsplit/experiment.hpp"
#include "shiftsplit/spectrum.hpp"

namespace ss = shiftsplit;

namespace {

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    const double v = std::stod(item, &used);
    if (used != item.size()) throw ss::ConfigError("bad number '" + item + "'");
    out.push_back(v);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Shift-splitting preconditioners for asymmetric saddle point systems"};

  std::string problem = "stokes";
  std::size_t s = 16;
  double mu = 1.0;
  double k = 2.0;
  std::string matrix;
  std::size_t n = 0;
  std::size_t m = 0;
  std::string precond = "ss";
  std::string alpha = "est";
  std::string alpha_sweep;
  double tol = 1e-7;
  std::size_t maxit = 1000;
  double inner_reduction = 1e2;
  std::size_t inner_maxit = 100;
  std::string inner = "auto";
  std::string spectrum_out;
  std::string format = "markdown";
  bool stats = false;

  app.add_option("--problem", problem, "Problem source")
      ->check(CLI::IsMember({"stokes", "external"}));
  app.add_option("--s", s, "Grid size of the Stokes problem")->check(CLI::PositiveNumber);
  app.add_option("--mu", mu, "Viscosity")->check(CLI::PositiveNumber);
  app.add_option("--k", k, "C = k B coupling factor")->check(CLI::PositiveNumber);
  app.add_option("--matrix", matrix, "Matrix Market file of the full saddle matrix");
  app.add_option("--n", n, "Velocity block size of the external matrix");
  app.add_option("--m", m, "Pressure block size of the external matrix");
  app.add_option("--precond", precond, "Preconditioner")
      ->check(CLI::IsMember({"none", "ss", "rss", "ppss", "aug"}));
  app.add_option("--alpha", alpha, "Parameter value or 'est'");
  app.add_option("--alpha-sweep", alpha_sweep, "Comma separated parameter values");
  app.add_option("--tol", tol, "Outer relative residual tolerance");
  app.add_option("--maxit", maxit, "Outer iteration cap");
  app.add_option("--inner-reduction", inner_reduction,
                 "Inner solves stop once the residual dropped by this factor");
  app.add_option("--inner-maxit", inner_maxit, "Inner iteration cap");
  app.add_option("--inner", inner, "Inner solver policy")
      ->check(CLI::IsMember({"auto", "cg", "gmres10", "direct"}));
  app.add_option("--spectrum-out", spectrum_out,
                 "Write the (preconditioned) spectrum as CSV, desk scale only");
  app.add_option("--format", format, "Output format")
      ->check(CLI::IsMember({"markdown", "csv"}));
  app.add_flag("--stats", stats, "Print block sizes and nonzero counts first");

  CLI11_PARSE(app, argc, argv);

  try {
    ss::ExperimentConfig cfg;
    if (problem == "stokes") {
      cfg.problem = ss::StokesProblem{s, mu, k};
    } else {
      if (matrix.empty()) throw ss::ConfigError("--problem external needs --matrix");
      cfg.problem = ss::ExternalProblem{matrix, n, m};
    }
    if (precond != "none") cfg.preconditioner = ss::parse_precond_kind(precond);
    cfg.inner_policy = *ss::parse_inner_policy(inner);

    if (!alpha_sweep.empty()) {
      cfg.alpha_mode = ss::AlphaSweep{parse_list(alpha_sweep)};
    } else if (alpha == "est") {
      cfg.alpha_mode = ss::AlphaEst{};
    } else {
      cfg.alpha_mode = ss::AlphaFixed{std::stod(alpha)};
    }

    if (!(inner_reduction > 1.0)) {
      throw ss::ConfigError("--inner-reduction must exceed 1");
    }
    cfg.rule = ss::StoppingRule{tol, maxit, 1.0 / inner_reduction, inner_maxit};
    cfg.validate();

    const auto fmt =
        format == "csv" ? ss::TableFormat::csv : ss::TableFormat::markdown;
    const ss::SaddleSystem sys = ss::build_problem(cfg.problem);
    if (stats) std::cout << ss::emit_stats(ss::problem_stats(sys), fmt) << '\n';

    const auto rows = std::holds_alternative<ss::AlphaSweep>(cfg.alpha_mode)
                          ? ss::sweep_alpha(cfg, sys)
                          : ss::run_experiment(cfg, sys);
    std::cout << ss::emit_table(rows, fmt);

    if (!spectrum_out.empty()) {
      const ss::SpectrumReport rep =
          cfg.preconditioner
              ? ss::preconditioned_spectrum(sys, *cfg.preconditioner,
                                            rows.front().alpha_used)
              : ss::saddle_spectrum(sys);
      ss::export_spectrum_csv(rep, spectrum_out);
    }
  } catch (const std::exception& e) {
    std::cerr << "ssbench: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
