#include <gtest/gtest.h>

#include <random>

#include "shiftsplit/dense.hpp"
#include "shiftsplit/errors.hpp"
#include "shiftsplit/saddle.hpp"
#include "test_support.hpp"

namespace ss = shiftsplit;
using ss::SparseMatrix;
using ss::testing::max_abs_diff;

namespace {

ss::SaddleSystem toy_system() {
  return ss::SaddleSystem(SparseMatrix::from_triplets(1, 1, {{0, 0, 2.0}}),
                          SparseMatrix::from_triplets(1, 1, {{0, 0, 1.0}}),
                          SparseMatrix::from_triplets(1, 1, {{0, 0, 1.0}}), 1.0);
}

}  // namespace

TEST(SaddleSystemTest, RejectsInconsistentShapes) {
  EXPECT_THROW(ss::SaddleSystem(ss::identity(2), ss::identity(3), ss::identity(3)),
               ss::DimensionError);
  EXPECT_THROW(ss::SaddleSystem(ss::identity(2), ss::identity(2),
                                SparseMatrix::from_triplets(2, 3, {})),
               ss::DimensionError);
}

TEST(SaddleSystemTest, RejectsMoreConstraintsThanUnknowns) {
  const auto b = SparseMatrix::from_triplets(3, 2, {{0, 0, 1.0}, {1, 1, 1.0}});
  EXPECT_THROW(ss::SaddleSystem(ss::identity(2), b, b), ss::DimensionError);
}

TEST(SaddleSystemTest, RejectsFalseCouplingClaim) {
  const auto b = SparseMatrix::from_triplets(1, 2, {{0, 0, 1.0}, {0, 1, 1.0}});
  const auto c = SparseMatrix::from_triplets(1, 2, {{0, 0, 2.0}, {0, 1, 3.0}});
  EXPECT_THROW(ss::SaddleSystem(ss::identity(2), b, c, 2.0), ss::StructureError);
  EXPECT_NO_THROW(ss::SaddleSystem(ss::identity(2), b, c));
}

TEST(BuildStokesTest, TableOneSizes) {
  const auto s16 = ss::build_stokes(16, 1.0, 2.0);
  EXPECT_EQ(s16.n(), 512u);
  EXPECT_EQ(s16.m(), 256u);
  EXPECT_EQ(s16.A().nnz(), 2432u);
  EXPECT_EQ(s16.B().nnz(), 992u);
  EXPECT_EQ(s16.C().nnz(), 992u);
  const auto s32 = ss::build_stokes(32, 1.0, 2.0);
  EXPECT_EQ(s32.A().nnz(), 9984u);
  EXPECT_EQ(s32.B().nnz(), 4032u);
}

TEST(BuildStokesTest, HandEvaluatedSingleCell) {
  const auto sys = ss::build_stokes(1, 1.0, 1.0);
  EXPECT_EQ(sys.n(), 2u);
  EXPECT_EQ(sys.m(), 1u);
  EXPECT_EQ(sys.A().at(0, 0), 16.0);
  EXPECT_EQ(sys.A().at(1, 1), 16.0);
  EXPECT_EQ(sys.A().at(0, 1), 0.0);
  EXPECT_EQ(sys.Bt().rows(), 2u);
  EXPECT_EQ(sys.Bt().at(0, 0), 2.0);
  EXPECT_EQ(sys.Bt().at(1, 0), 2.0);
  EXPECT_EQ(sys.C(), sys.B());
  EXPECT_EQ(sys.c_equals_kB(), 1.0);
}

TEST(BuildStokesTest, CouplingFactor) {
  const auto sys = ss::build_stokes(4, 0.5, 3.0);
  EXPECT_EQ(sys.c_equals_kB(), 3.0);
  EXPECT_LE(ss::max_abs(ss::add(sys.C(), sys.B(), -3.0)), 0.0);
}

TEST(SplitExternalTest, SignConvention) {
  std::vector<ss::Triplet> t{{0, 0, 4.0}, {1, 1, 4.0}, {2, 2, 4.0},
                             {0, 3, 1.0}, {1, 4, 1.0}, {3, 0, -1.0},
                             {4, 1, -1.0}};
  const auto full = SparseMatrix::from_triplets(5, 5, t);
  const auto sys = ss::split_external(full, 3, 2);
  EXPECT_EQ(sys.C(), SparseMatrix::from_triplets(2, 3, {{0, 0, 1.0}, {1, 1, 1.0}}));
  EXPECT_EQ(sys.B(), sys.C());
  EXPECT_EQ(sys.c_equals_kB(), 1.0);
}

TEST(SplitExternalTest, NonzeroTrailingBlockThrows) {
  auto t = ss::assemble(ss::build_stokes(2, 1.0, 2.0)).to_triplets();
  t.push_back({9, 9, 1e-10});
  const auto full = SparseMatrix::from_triplets(12, 12, t);
  EXPECT_THROW(ss::split_external(full, 8, 4), ss::StructureError);
}

TEST(SplitExternalTest, ShapeMismatchThrows) {
  EXPECT_THROW(ss::split_external(ss::identity(5), 3, 3), ss::DimensionError);
}

TEST(SplitExternalTest, GeneralCouplingLeavesKUnset) {
  std::vector<ss::Triplet> t{{0, 0, 4.0}, {1, 1, 4.0}, {0, 2, 1.0},
                             {1, 2, 1.0}, {2, 0, -1.0}, {2, 1, -2.0}};
  const auto sys = ss::split_external(SparseMatrix::from_triplets(3, 3, t), 2, 1);
  EXPECT_FALSE(sys.c_equals_kB().has_value());
  EXPECT_EQ(sys.C().at(0, 1), 2.0);
}

TEST(BlockApplyTest, ZeroAndToy) {
  const auto toy = toy_system();
  EXPECT_EQ(ss::block_apply(toy, ss::Vector{0, 0}), (ss::Vector{0, 0}));
  EXPECT_EQ(ss::block_apply(toy, ss::Vector{1, 1}), (ss::Vector{3, -1}));
  EXPECT_THROW(ss::block_apply(toy, ss::Vector{1, 1, 1}), ss::DimensionError);
}

TEST(BlockApplyTest, SymmetricPartIsVelocityEnergyWhenBEqualsC) {
  std::mt19937_64 rng(41);
  const auto sys = ss::build_stokes(3, 1.0, 1.0);
  const auto x = ss::testing::random_vector(rng, sys.order());
  const auto y = ss::block_apply(sys, x);
  const ss::Vector x1(x.begin(), x.begin() + sys.n());
  const double energy = ss::dot(x1, ss::spmv(sys.A(), x1));
  EXPECT_NEAR(ss::dot(y, x), energy, 1e-12 * energy);
  EXPECT_GT(energy, 0.0);
}

TEST(RhsTest, ToyAndSingleCell) {
  EXPECT_EQ(ss::rhs_all_ones(toy_system()), (ss::Vector{3, -1}));
  EXPECT_EQ(ss::rhs_all_ones(ss::build_stokes(1, 1.0, 1.0)),
            (ss::Vector{18, 18, -4}));
}

TEST(RhsTest, ZeroRowsGiveZeroEntries) {
  const auto b = SparseMatrix::from_triplets(2, 3, {{0, 0, 1.0}});
  const auto sys = ss::SaddleSystem(ss::identity(3), b, b);
  const auto f = ss::rhs_all_ones(sys);
  EXPECT_EQ(f[4], 0.0);
  EXPECT_EQ(f[3], -1.0);
}

TEST(AlphaEstTest, ToySystem) {
  const auto est = ss::alpha_est(toy_system());
  EXPECT_TRUE(est.converged);
  EXPECT_NEAR(est.alpha, 0.5, 1e-12);
}

TEST(AlphaEstTest, StokesGrids) {
  const auto e16 = ss::alpha_est(ss::build_stokes(16, 1.0, 2.0));
  EXPECT_TRUE(e16.converged);
  EXPECT_NEAR(e16.alpha, 2.03, 0.05);
  const auto e32 = ss::alpha_est(ss::build_stokes(32, 1.0, 2.0));
  EXPECT_TRUE(e32.converged);
  EXPECT_NEAR(e32.alpha, 2.01, 0.05);
}

TEST(AlphaEstTest, ScalesInverselyWithViscosity) {
  const auto e1 = ss::alpha_est(ss::build_stokes(8, 1.0, 2.0), 1e-10);
  const auto e01 = ss::alpha_est(ss::build_stokes(8, 0.1, 2.0), 1e-10);
  EXPECT_NEAR(e01.alpha / e1.alpha, 10.0, 1e-4);
}

TEST(CheckAssumptionsTest, StokesHoldsEverything) {
  const auto rep = ss::check_assumptions(ss::build_stokes(8, 1.0, 2.0));
  EXPECT_TRUE(rep.checked_at_scale);
  EXPECT_TRUE(rep.a_symmetric);
  EXPECT_TRUE(rep.a_positive_definite);
  EXPECT_TRUE(rep.rank_B_full);
  EXPECT_TRUE(rep.rank_C_full);
}

TEST(CheckAssumptionsTest, IndefiniteA) {
  const auto a = SparseMatrix::from_triplets(2, 2, {{0, 0, 1.0}, {1, 1, -1.0}});
  const auto b = SparseMatrix::from_triplets(1, 2, {{0, 0, 1.0}});
  const auto rep = ss::check_assumptions(ss::SaddleSystem(a, b, b));
  EXPECT_TRUE(rep.a_symmetric);
  EXPECT_FALSE(rep.a_positive_definite);
}

TEST(CheckAssumptionsTest, ZeroRowInB) {
  const auto b = SparseMatrix::from_triplets(2, 3, {{0, 0, 1.0}});
  const auto c = SparseMatrix::from_triplets(2, 3, {{0, 0, 1.0}, {1, 2, 1.0}});
  const auto rep = ss::check_assumptions(ss::SaddleSystem(ss::identity(3), b, c));
  EXPECT_FALSE(rep.rank_B_full);
  EXPECT_TRUE(rep.rank_C_full);
}

TEST(CheckAssumptionsTest, AboveDeskScaleIsUnchecked) {
  const auto rep = ss::check_assumptions(ss::build_stokes(32, 1.0, 2.0));
  EXPECT_FALSE(rep.checked_at_scale);
  EXPECT_TRUE(rep.a_symmetric);
}

TEST(SaddlePropertyTest, TableOneNnzCounts) {
  const std::size_t sizes[] = {16, 32, 64};
  const std::size_t nnz_a[] = {2432, 9984, 40448};
  const std::size_t nnz_b[] = {992, 4032, 16256};
  for (int i = 0; i < 3; ++i) {
    const auto sys = ss::build_stokes(sizes[i], 1.0, 2.0);
    EXPECT_EQ(sys.A().nnz(), nnz_a[i]);
    EXPECT_EQ(sys.B().nnz(), nnz_b[i]);
    EXPECT_EQ(sys.C().nnz(), nnz_b[i]);
  }
}

TEST(SaddlePropertyTest, StokesASymmetricWithPositiveSpectrum) {
  for (std::size_t s = 1; s <= 8; ++s) {
    const auto sys = ss::build_stokes(s, 0.7, 2.0);
    EXPECT_EQ(ss::transpose(sys.A()), sys.A());
    double lmin = std::numeric_limits<double>::infinity();
    for (const auto& z : ss::eigvals(ss::DenseMatrix::from_sparse(sys.A()))) {
      EXPECT_LE(std::abs(z.imag()), 1e-8);
      lmin = std::min(lmin, z.real());
    }
    EXPECT_GT(lmin, 0.0) << "s=" << s;
  }
}

TEST(SaddlePropertyTest, BlockApplyMatchesDenseAssembly) {
  std::mt19937_64 rng(42);
  for (std::size_t s = 1; s <= 8; ++s) {
    const auto sys = ss::build_stokes(s, 1.0, 2.0);
    const auto dense = ss::dense_block_matrix(sys);
    for (int trial = 0; trial < 5; ++trial) {
      const auto x = ss::testing::random_vector(rng, sys.order());
      const auto ref = dense.multiply(x);
      EXPECT_LE(max_abs_diff(ss::block_apply(sys, x), ref),
                1e-13 * std::max(1.0, ss::testing::inf_norm(ref)));
    }
  }
}

TEST(SaddlePropertyTest, SplitRoundTrip) {
  for (std::size_t s = 1; s <= 8; ++s) {
    const auto sys = ss::build_stokes(s, 1.0, 2.0);
    const auto back = ss::split_external(ss::assemble(sys), sys.n(), sys.m());
    EXPECT_EQ(back.A(), sys.A());
    EXPECT_EQ(back.B(), sys.B());
    EXPECT_EQ(back.C(), sys.C());
    EXPECT_EQ(back.c_equals_kB(), 2.0);
  }
}
