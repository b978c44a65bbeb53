#include <gtest/gtest.h>

#include <filesystem>

#include "shiftsplit/errors.hpp"
#include "shiftsplit/experiment.hpp"
#include "shiftsplit/matrix_market.hpp"

namespace ss = shiftsplit;
using ss::AlphaEst;
using ss::AlphaFixed;
using ss::AlphaSweep;
using ss::ExperimentConfig;
using ss::PrecondKind;
using ss::StokesProblem;
using ss::TableFormat;
using ss::TableRow;

namespace {

ExperimentConfig stokes_config(std::size_t s, double mu,
                               std::optional<PrecondKind> kind,
                               ss::AlphaMode mode) {
  ExperimentConfig cfg;
  cfg.problem = StokesProblem{s, mu, 2.0};
  cfg.preconditioner = kind;
  cfg.alpha_mode = std::move(mode);
  return cfg;
}

}  // namespace

TEST(ExperimentConfigTest, Validation) {
  EXPECT_THROW(stokes_config(4, 1.0, PrecondKind::ss, AlphaSweep{}).validate(),
               ss::ConfigError);
  EXPECT_THROW(stokes_config(4, 1.0, PrecondKind::ss, AlphaFixed{-1.0}).validate(),
               ss::ConfigError);
  EXPECT_THROW(stokes_config(0, 1.0, PrecondKind::ss, AlphaFixed{1.0}).validate(),
               ss::ConfigError);
  EXPECT_THROW(stokes_config(4, 0.0, PrecondKind::ss, AlphaFixed{1.0}).validate(),
               ss::ConfigError);
  EXPECT_NO_THROW(stokes_config(4, 1.0, std::nullopt, AlphaEst{}).validate());
}

TEST(ExperimentConfigTest, ExternalOrderMustMatch) {
  const auto path = std::filesystem::temp_directory_path() / "shiftsplit_ext.mtx";
  ss::write_matrix_market(ss::assemble(ss::build_stokes(2, 1.0, 2.0)), path);
  EXPECT_THROW(ss::build_problem(ss::ExternalProblem{path, 8, 3}), ss::ConfigError);
  const auto sys = ss::build_problem(ss::ExternalProblem{path, 8, 4});
  EXPECT_EQ(sys.c_equals_kB(), 2.0);
  std::filesystem::remove(path);
  EXPECT_THROW(ss::build_problem(ss::ExternalProblem{path, 8, 4}), ss::Error);
}

TEST(RunExperimentTest, ShiftSplittingAtSmallAlpha) {
  const auto rows =
      ss::run_experiment(stokes_config(16, 1.0, PrecondKind::ss, AlphaFixed{0.1}));
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].label, "SS");
  EXPECT_TRUE(rows[0].converged);
  EXPECT_LE(rows[0].iters, 16u);
  EXPECT_GE(rows[0].iters, 4u);
  EXPECT_LE(rows[0].final_rk, 1e-7);
}

TEST(RunExperimentTest, EstimatedAlphaAtLowViscosity) {
  const auto rows =
      ss::run_experiment(stokes_config(16, 0.1, PrecondKind::ss, AlphaEst{}));
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_NEAR(rows[0].alpha_used, 18.34, 0.15 * 18.34);
  EXPECT_TRUE(rows[0].converged);
}

TEST(RunExperimentTest, Unpreconditioned) {
  const auto rows =
      ss::run_experiment(stokes_config(16, 1.0, std::nullopt, AlphaFixed{}));
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].label, "No Prec.");
  EXPECT_TRUE(rows[0].converged);
  EXPECT_GE(rows[0].iters, 120u);
  EXPECT_LE(rows[0].iters, 146u);
}

TEST(RunExperimentTest, NonConvergenceGivesDaggerRow) {
  auto cfg = stokes_config(8, 1.0, std::nullopt, AlphaFixed{});
  cfg.rule.max_outer = 3;
  const auto rows = ss::run_experiment(cfg);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_FALSE(rows[0].converged);
  EXPECT_EQ(rows[0].iters, 3u);
  EXPECT_NE(ss::emit_table(rows, TableFormat::markdown).find("†"), std::string::npos);
}

TEST(SweepAlphaTest, RowsDifferAcrossAlpha) {
  const auto rows = ss::sweep_alpha(
      stokes_config(16, 1.0, PrecondKind::ss, AlphaSweep{{0.1, 0.05, 0.01}}));
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0].alpha_used, 0.1);
  EXPECT_EQ(rows[2].alpha_used, 0.01);
  EXPECT_FALSE(rows[0].iters == rows[1].iters && rows[1].iters == rows[2].iters &&
               rows[0].final_rk == rows[1].final_rk &&
               rows[1].final_rk == rows[2].final_rk);
  int fastest = 0;
  for (const auto& r : rows) fastest += r.fastest ? 1 : 0;
  EXPECT_EQ(fastest, 1);
}

TEST(SweepAlphaTest, SingleElementSweepEqualsFixedMode) {
  const auto sweep = ss::sweep_alpha(
      stokes_config(8, 1.0, PrecondKind::rss, AlphaSweep{{0.3}}));
  const auto fixed =
      ss::run_experiment(stokes_config(8, 1.0, PrecondKind::rss, AlphaFixed{0.3}));
  ASSERT_EQ(sweep.size(), 1u);
  ASSERT_EQ(fixed.size(), 1u);
  EXPECT_EQ(sweep[0].iters, fixed[0].iters);
  EXPECT_EQ(sweep[0].final_rk, fixed[0].final_rk);
  EXPECT_EQ(sweep[0].alpha_used, fixed[0].alpha_used);
}

TEST(SweepAlphaTest, IllStokesTrendWhenPresent) {
  const std::filesystem::path path = "data/Ill_Stokes.mtx";
  if (!std::filesystem::exists(path)) GTEST_SKIP() << "matrix file not present";
  ExperimentConfig cfg;
  cfg.problem = ss::ExternalProblem{path, 15672, 5224};
  cfg.preconditioner = PrecondKind::ss;
  cfg.alpha_mode = AlphaSweep{{0.1, 1e-4}};
  const auto rows = ss::sweep_alpha(cfg);
  EXPECT_GT(rows[0].iters, rows[1].iters);
}

TEST(EmitTableTest, EmptyRowsGiveHeaderOnly) {
  EXPECT_EQ(ss::emit_table({}, TableFormat::csv), "label,alpha,iters,cpu,Rk,converged\n");
  EXPECT_EQ(ss::emit_table({}, TableFormat::markdown),
            "| label | alpha | iters | cpu | Rk | converged |\n"
            "|---|---|---|---|---|---|\n");
}

TEST(EmitTableTest, ConvergedRow) {
  TableRow row;
  row.label = "SS";
  row.alpha_used = 0.1;
  row.iters = 8;
  row.cpu_seconds = 0.0312;
  row.final_rk = 8.4e-8;
  row.converged = true;
  EXPECT_EQ(ss::emit_table({row}, TableFormat::csv),
            "label,alpha,iters,cpu,Rk,converged\nSS,0.1,8,0.03,8.4e-8,true\n");
  EXPECT_EQ(ss::emit_table({row}, TableFormat::markdown),
            "| label | alpha | iters | cpu | Rk | converged |\n"
            "|---|---|---|---|---|---|\n"
            "| SS | 0.1 | 8 | 0.03 | 8.4e-8 | yes |\n");
}

TEST(EmitTableTest, DaggerRow) {
  TableRow row;
  row.label = "PPSS";
  row.alpha_used = 2.0;
  row.iters = 1000;
  row.cpu_seconds = 1.5;
  row.final_rk = 3.24e-3;
  row.converged = false;
  row.fastest = true;
  EXPECT_EQ(ss::emit_table({row}, TableFormat::csv),
            "label,alpha,iters,cpu,Rk,converged\nPPSS,2,,1.50,3.2e-3,false\n");
  const auto md = ss::emit_table({row}, TableFormat::markdown);
  EXPECT_NE(md.find("| † |"), std::string::npos);
  EXPECT_NE(md.find("**1.50**"), std::string::npos);
}

TEST(EmitTableTest, ResidualFormatting) {
  EXPECT_EQ(ss::format_rk(8.4e-8), "8.4e-8");
  EXPECT_EQ(ss::format_rk(1.0), "1.0e+0");
  EXPECT_EQ(ss::format_rk(9.96e-8), "1.0e-7");
  EXPECT_EQ(ss::format_rk(2.5e-12), "2.5e-12");
}

TEST(EmitStatsTest, TableOneLayout) {
  const auto st = ss::problem_stats(ss::build_stokes(16, 1.0, 2.0));
  EXPECT_EQ(ss::emit_stats(st, TableFormat::csv),
            "n,m,nnz_A,nnz_B,nnz_C\n512,256,2432,992,992\n");
}

TEST(BenchPropertyTest, ReportedResidualIsRecomputed) {
  for (const auto kind : {PrecondKind::ss, PrecondKind::rss, PrecondKind::ppss,
                          PrecondKind::aug}) {
    const auto rows =
        ss::run_experiment(stokes_config(8, 1.0, kind, AlphaSweep{{0.1, 1.0}}));
    for (const auto& r : rows) {
      EXPECT_NEAR(r.final_rk, r.reported_rk, 1e-9) << r.label;
      EXPECT_EQ(r.converged, r.final_rk <= 1e-7);
      EXPECT_LE(r.iters, 1000u);
    }
  }
  const auto plain = ss::run_experiment(stokes_config(8, 1.0, std::nullopt, AlphaFixed{}));
  EXPECT_NEAR(plain[0].final_rk, plain[0].reported_rk, 1e-9);
}

TEST(BenchPropertyTest, EstimatedAlphaMatchesSaddleModel) {
  for (const double mu : {1.0, 0.1}) {
    const auto sys = ss::build_stokes(16, mu, 2.0);
    const auto rows = ss::run_experiment(
        stokes_config(16, mu, PrecondKind::rss, AlphaEst{}), sys);
    const double direct = ss::alpha_est(sys).alpha;
    EXPECT_NEAR(rows[0].alpha_used, direct, 1e-4 * direct);
  }
}

TEST(BenchPropertyTest, RunsAreDeterministic) {
  for (const auto kind : {PrecondKind::ss, PrecondKind::ppss}) {
    const auto cfg = stokes_config(16, 1.0, kind, AlphaSweep{{0.1, 2.0}});
    const auto first = ss::run_experiment(cfg);
    const auto second = ss::run_experiment(cfg);
    ASSERT_EQ(first.size(), second.size());
    for (std::size_t i = 0; i < first.size(); ++i) {
      EXPECT_EQ(first[i].iters, second[i].iters);
      EXPECT_EQ(first[i].final_rk, second[i].final_rk);
      EXPECT_EQ(first[i].inner_iterations, second[i].inner_iterations);
    }
  }
}
