#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "shiftsplit/dense.hpp"
#include "shiftsplit/errors.hpp"
#include "shiftsplit/saddle.hpp"
#include "shiftsplit/spectrum.hpp"
#include "shiftsplit/ss_iteration.hpp"
#include "test_support.hpp"

namespace ss = shiftsplit;
using ss::Complex;
using ss::ComplexList;
using ss::DenseMatrix;
using ss::PrecondKind;
using ss::SparseMatrix;
using ss::testing::match_distance;

namespace {

ss::SaddleSystem toy_system() {
  return ss::SaddleSystem(SparseMatrix::from_triplets(1, 1, {{0, 0, 2.0}}),
                          SparseMatrix::from_triplets(1, 1, {{0, 0, 1.0}}),
                          SparseMatrix::from_triplets(1, 1, {{0, 0, 1.0}}), 1.0);
}

std::vector<double> log_grid() {
  std::vector<double> out;
  for (int i = 0; i < 9; ++i) out.push_back(std::pow(10.0, -2.0 + 0.5 * i));
  return out;
}

}  // namespace

TEST(PreconditionedSpectrumTest, ToyShiftSplitting) {
  const auto rep = ss::preconditioned_spectrum(toy_system(), PrecondKind::ss, 1.0);
  EXPECT_LE(match_distance(rep.eigenvalues, {{0.5, 0}, {0.5, 0}}), 1e-12);
  const DenseMatrix m = ss::preconditioned_matrix(toy_system(), PrecondKind::ss, 1.0);
  const DenseMatrix expect{{0.75, 0.25}, {-0.25, 0.25}};
  EXPECT_LE(ss::testing::max_abs_diff(m, expect), 1e-15);
}

TEST(PreconditionedSpectrumTest, ToyRelaxedShiftSplitting) {
  const auto rep = ss::preconditioned_spectrum(toy_system(), PrecondKind::rss, 1.0);
  EXPECT_LE(match_distance(rep.eigenvalues, {{1.0, 0}, {1.0 / 3.0, 0}}), 1e-12);
}

TEST(PreconditionedSpectrumTest, SaddleSpectrumOrder) {
  const auto sys = ss::build_stokes(4, 1.0, 2.0);
  const auto rep = ss::saddle_spectrum(sys);
  EXPECT_EQ(rep.eigenvalues.size(), sys.order());
  ComplexList conj;
  for (const auto& z : rep.eigenvalues) conj.push_back(std::conj(z));
  EXPECT_LE(match_distance(rep.eigenvalues, conj), 1e-8);
}

TEST(PreconditionedSpectrumTest, RefusedAboveDeskScale) {
  const auto sys = ss::build_stokes(32, 1.0, 2.0);
  EXPECT_THROW(ss::preconditioned_spectrum(sys, PrecondKind::ss, 1.0), ss::ConfigError);
  EXPECT_THROW(ss::verify_thm3(sys, 1.0), ss::ConfigError);
  EXPECT_THROW(ss::verify_thm4(sys, 1.0), ss::ConfigError);
}

TEST(Theorem3Test, ToySystem) {
  const auto res = ss::verify_thm3(toy_system(), 1.0);
  EXPECT_TRUE(res.holds);
  ASSERT_TRUE(res.report.containment.has_value());
  EXPECT_EQ(res.report.containment->center, Complex(0.5, 0.0));
  EXPECT_EQ(res.report.containment->radius, 0.5);
}

TEST(Theorem3Test, StokesAlphas) {
  const auto sys = ss::build_stokes(8, 1.0, 2.0);
  for (const double alpha : {0.25, 1.0, 4.0}) {
    EXPECT_TRUE(ss::verify_thm3(sys, alpha).holds) << "alpha=" << alpha;
  }
}

TEST(Theorem3Test, NegativeControl) {
  EXPECT_FALSE(ss::in_half_disk_region(ss::eigvals(DenseMatrix{{-1, 0}, {0, 0.5}})));
  EXPECT_TRUE(ss::in_half_disk_region({{0.5, 0.5}, {1.0, 0.0}, {0.0, 0.0}}));
  EXPECT_FALSE(ss::in_half_disk_region({{0.9, 0.5}}));
}

TEST(Theorem4Test, ToySystem) {
  const auto res = ss::verify_thm4(toy_system(), 1.0);
  EXPECT_TRUE(res.multiplicity_ok);
  ASSERT_EQ(res.secondary_eigs.size(), 1u);
  EXPECT_NEAR(res.secondary_eigs[0].real(), 1.0 / 3.0, 1e-12);
  EXPECT_NEAR(res.secondary_eigs[0].imag(), 0.0, 1e-12);
}

TEST(Theorem4Test, StokesStructure) {
  const auto res = ss::verify_thm4(ss::build_stokes(8, 1.0, 2.0), 1.0);
  EXPECT_TRUE(res.multiplicity_ok);
  EXPECT_LE(res.identity_block_error, 1e-10);
  EXPECT_EQ(res.secondary_eigs.size(), 64u);
}

TEST(Theorem4Test, UnionMatchesFullSpectrum) {
  const auto sys = ss::build_stokes(4, 1.0, 2.0);
  const double alpha = 1.0;
  const auto res = ss::verify_thm4(sys, alpha);
  ComplexList expected(sys.n(), Complex(1.0, 0.0));
  expected.insert(expected.end(), res.secondary_eigs.begin(), res.secondary_eigs.end());
  const auto full = ss::preconditioned_spectrum(sys, PrecondKind::rss, alpha);
  EXPECT_LE(match_distance(full.eigenvalues, expected), 1e-6);
}

TEST(SpectrumUtilityTest, SortedAndMultisetDistance) {
  const ComplexList a{{1, -1}, {0, 0}, {1, 1}};
  const auto sorted = ss::sorted_spectrum(a);
  EXPECT_EQ(sorted, (ComplexList{{0, 0}, {1, -1}, {1, 1}}));
  EXPECT_EQ(ss::multiset_distance(a, sorted), 0.0);
  EXPECT_TRUE(std::isinf(ss::multiset_distance(a, {{0, 0}})));
  EXPECT_NEAR(ss::multiset_distance({{0, 0}, {1, 0}}, {{1.1, 0}, {0, 0}}), 0.1, 1e-15);
}

TEST(SpectrumCsvTest, DoubleEigenvalueLines) {
  ss::SpectrumReport rep{"toy", 1.0, {{0.5, 0}, {0.5, 0}}, std::nullopt};
  std::ostringstream out;
  ss::export_spectrum_csv(rep, out);
  EXPECT_EQ(out.str(), "# toy,1\n0.5,0\n0.5,0\n");
}

TEST(SpectrumCsvTest, ConjugatePairHasOppositeImaginaryParts) {
  ss::SpectrumReport rep{"pair", 0.25, {{0.2, 0.3}, {0.2, -0.3}}, std::nullopt};
  std::ostringstream out;
  ss::export_spectrum_csv(rep, out);
  EXPECT_EQ(out.str(), "# pair,0.25\n0.20000000000000001,-0.29999999999999999\n"
                       "0.20000000000000001,0.29999999999999999\n");
}

TEST(SpectrumCsvTest, RoundTrip) {
  const auto sys = ss::build_stokes(3, 1.0, 2.0);
  const auto rep = ss::preconditioned_spectrum(sys, PrecondKind::ss, 0.7);
  const auto path = std::filesystem::temp_directory_path() / "shiftsplit_spec.csv";
  ss::export_spectrum_csv(rep, path);
  const auto back = ss::read_spectrum_csv(path);
  std::filesystem::remove(path);
  EXPECT_EQ(back.alpha, 0.7);
  EXPECT_EQ(back.eigenvalues, ss::sorted_spectrum(rep.eigenvalues));
}

TEST(SpectrumCsvTest, MalformedInput) {
  std::istringstream no_header("0.5,0\n");
  EXPECT_THROW(ss::read_spectrum_csv(no_header), ss::ParseError);
  std::istringstream bad_line("# x,1\n0.5\n");
  EXPECT_THROW(ss::read_spectrum_csv(bad_line), ss::ParseError);
  EXPECT_THROW(ss::export_spectrum_csv({}, "/nonexistent/dir/out.csv"), ss::Error);
}

TEST(SpectrumPropertyTest, ShiftSplittingSpectrumMatchesIterationMatrix) {
  for (const std::size_t s : {2u, 4u, 8u}) {
    const auto sys = ss::build_stokes(s, 1.0, 2.0);
    for (const double alpha : {0.25, 1.0, 4.0}) {
      const auto lambdas =
          ss::preconditioned_spectrum(sys, PrecondKind::ss, alpha).eigenvalues;
      ComplexList mapped;
      for (const auto& mu : ss::eigvals(ss::iteration_matrix(sys, alpha))) {
        mapped.push_back(0.5 * (1.0 - mu));
      }
      EXPECT_LE(2.0 * match_distance(lambdas, mapped), 1e-6)
          << "s=" << s << " alpha=" << alpha;
    }
  }
}

TEST(SpectrumPropertyTest, Theorem3OnLogGrid) {
  const auto sys = ss::build_stokes(8, 1.0, 2.0);
  for (const double alpha : log_grid()) {
    const auto res = ss::verify_thm3(sys, alpha);
    EXPECT_TRUE(res.holds) << "alpha=" << alpha;
    ASSERT_TRUE(res.report.containment.has_value());
    EXPECT_TRUE(res.report.containment->all_inside);
  }
}

TEST(SpectrumPropertyTest, Theorem4OnLogGrid) {
  const auto sys = ss::build_stokes(8, 1.0, 2.0);
  for (const double alpha : log_grid()) {
    const auto res = ss::verify_thm4(sys, alpha);
    EXPECT_TRUE(res.multiplicity_ok) << "alpha=" << alpha;
    EXPECT_EQ(res.secondary_eigs.size(), sys.m());
    double min_re = std::numeric_limits<double>::infinity();
    for (const auto& z : res.secondary_eigs) min_re = std::min(min_re, z.real());
    RecordProperty("min_secondary_real_part_alpha_" + std::to_string(alpha),
                   std::to_string(min_re));
  }
}
