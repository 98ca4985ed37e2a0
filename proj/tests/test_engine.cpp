#include <gtest/gtest.h>

#include <random>

#include "fdbem/fda_engine.hpp"
#include "fdbem/mesh.hpp"
#include "fdbem/oracles.hpp"

using namespace fdbem;

namespace {

constexpr OperatorKind kBoth[] = {OperatorKind::Lhs, OperatorKind::Rhs};

CVector random_vector(std::size_t n, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> g;
  CVector q(n);
  for (auto& x : q) x = Complex(g(rng), g(rng));
  return q;
}

double rel(const CVector& a, const CVector& b) { return (a - b).norm() / b.norm(); }

struct Problem {
  TriMesh mesh;
  ElementGeometry geom;
  WaveContext ctx;

  Problem(int subdivisions, double k)
      : mesh(generate_sphere_mesh(subdivisions, 1.0)), geom(bie_geometry(mesh)), ctx(k) {}
};

EngineOptions options(int max_leaf) {
  EngineOptions opt;
  opt.max_leaf = max_leaf;
  return opt;
}

}  // namespace

TEST(Engine, ZeroChargesGiveZero) {
  const Problem pb(3, kPi);
  FdaEngine e(pb.geom, pb.ctx, options(32));
  e.precompute(kBoth);
  for (auto kind : kBoth) {
    const CVector p = e.apply(kind, CVector::Zero(pb.geom.size()));
    EXPECT_EQ(p.cwiseAbs().maxCoeff(), 0.0);
  }
}

TEST(Engine, LinearAndDeterministic) {
  const Problem pb(3, 2.0 * kPi);
  FdaEngine e(pb.geom, pb.ctx, options(16));
  e.precompute(kBoth);
  const CVector q1 = random_vector(pb.geom.size(), 1), q2 = random_vector(pb.geom.size(), 2);
  const Complex a(0.3, -1.2), b(-2.0, 0.5);
  for (auto kind : kBoth) {
    const CVector p1 = e.apply(kind, q1), p2 = e.apply(kind, q2);
    EXPECT_LE(rel(e.apply(kind, a * q1 + b * q2), a * p1 + b * p2), 1e-12);
    EXPECT_EQ(e.apply(kind, q1), p1);  // bitwise
  }
}

TEST(Engine, Preconditions) {
  const Problem pb(2, kPi);
  FdaEngine e(pb.geom, pb.ctx, options(8));
  EXPECT_FALSE(e.ready(OperatorKind::Lhs));
  EXPECT_THROW(e.apply(OperatorKind::Lhs, CVector::Zero(pb.geom.size())), Error);
  const OperatorKind lhs[] = {OperatorKind::Lhs};
  e.precompute(lhs);
  EXPECT_TRUE(e.ready(OperatorKind::Lhs));
  EXPECT_FALSE(e.ready(OperatorKind::Rhs));
  EXPECT_THROW(e.apply(OperatorKind::Lhs, CVector::Zero(3)), Error);
  EXPECT_THROW(e.apply(OperatorKind::Rhs, CVector::Zero(pb.geom.size())), Error);
}

TEST(Engine, NearBlocksMatchDenseSubBlocks) {
  const Problem pb(2, kPi);  // 128 elements
  FdaEngine e(pb.geom, pb.ctx, options(8));
  e.precompute(kBoth);
  const auto& tree = e.tree();
  for (auto kind : kBoth) {
    const CMatrix dense = dense_assemble(kind, pb.geom, pb.ctx);
    std::size_t blocks = 0;
    for (std::size_t c = 0; c < tree.cubes.size(); ++c) {
      if (!tree.cubes[c].is_leaf) continue;
      const CMatrix& block = e.near_block(kind, static_cast<int>(c));
      const auto rows = tree.elements(static_cast<int>(c));
      const auto& cols = e.near_sources(static_cast<int>(c));
      ASSERT_EQ(block.rows(), static_cast<Eigen::Index>(rows.size()));
      ASSERT_EQ(block.cols(), static_cast<Eigen::Index>(cols.size()));
      for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < cols.size(); ++j) {
          EXPECT_LE(std::abs(block(i, j) - dense(rows[i], cols[j])), 1e-10);
        }
      }
      ++blocks;
    }
    EXPECT_GT(blocks, 1u);
  }
}

// Both kinds against the O(N^2) oracle.
TEST(Engine, MatchesDirectSum) {
  const double eps = TranslationParams{}.epsilon;
  for (auto [n, k] : {std::pair{3, kPi}, std::pair{3, 2.0 * kPi}}) {
    const Problem pb(n, k);
    FdaEngine e(pb.geom, pb.ctx, options(32));
    e.precompute(kBoth);
    for (unsigned seed : {11u, 12u}) {
      const CVector q = random_vector(pb.geom.size(), seed);
      const auto ref = direct_sum(kBoth, pb.geom, pb.ctx, q);
      EXPECT_LE(rel(e.apply(OperatorKind::Lhs, q), ref[0].col(0)), 10 * eps) << k;
      EXPECT_LE(rel(e.apply(OperatorKind::Rhs, q), ref[1].col(0)), 10 * eps) << k;
    }
  }
}

TEST(Engine, HighFrequencyLevelsMatchDirectSum) {
  const Problem pb(4, 4.0 * kPi);  // 2048 elements, two wavelengths per unit
  FdaEngine e(pb.geom, pb.ctx, options(32));
  ASSERT_GT(e.stats().m2l_high, 0u);
  e.precompute(kBoth);
  const CVector q = random_vector(pb.geom.size(), 13);
  const auto ref = direct_sum(kBoth, pb.geom, pb.ctx, q);
  EXPECT_LE(rel(e.apply(OperatorKind::Lhs, q), ref[0].col(0)), 10 * TranslationParams{}.epsilon);
  EXPECT_LE(rel(e.apply(OperatorKind::Rhs, q), ref[1].col(0)), 10 * TranslationParams{}.epsilon);
}

TEST(Engine, LowFrequencyOnlyPath) {
  const Problem pb(3, 0.5);
  FdaEngine e(pb.geom, pb.ctx, options(16));
  const EngineStats s = e.stats();
  EXPECT_EQ(s.high_levels, 0u);
  EXPECT_EQ(s.m2l_high, 0u);
  EXPECT_GT(s.far_pairs, 0u);
  e.precompute(kBoth);
  const CVector q = random_vector(pb.geom.size(), 14);
  const auto ref = direct_sum(kBoth, pb.geom, pb.ctx, q);
  EXPECT_LE(rel(e.apply(OperatorKind::Lhs, q), ref[0].col(0)), 10 * TranslationParams{}.epsilon);
  EXPECT_LE(rel(e.apply(OperatorKind::Rhs, q), ref[1].col(0)), 10 * TranslationParams{}.epsilon);
}

TEST(Engine, LeafSizeDoesNotChangeTheResult) {
  const Problem pb(3, kPi);
  FdaEngine fine(pb.geom, pb.ctx, options(4));
  FdaEngine coarse(pb.geom, pb.ctx, options(16));
  fine.precompute(kBoth);
  coarse.precompute(kBoth);
  EXPECT_GT(fine.tree().depth(), coarse.tree().depth());
  const CVector q = random_vector(pb.geom.size(), 15);
  for (auto kind : kBoth) {
    EXPECT_LE(rel(fine.apply(kind, q), coarse.apply(kind, q)), 10 * TranslationParams{}.epsilon);
  }
}

TEST(Engine, StatsAndMemory) {
  const Problem pb(3, 2.0 * kPi);
  FdaEngine e(pb.geom, pb.ctx, options(32));
  const std::size_t before = e.memory_bytes();
  EXPECT_GT(before, 0u);
  e.precompute(kBoth);
  EXPECT_GT(e.memory_bytes(), before);
  const EngineStats s = e.stats();
  EXPECT_EQ(s.cubes, e.tree().cubes.size());
  EXPECT_EQ(s.levels, static_cast<std::size_t>(e.tree().depth() + 1));
  EXPECT_EQ(s.far_pairs, e.lists().num_far_pairs());
  EXPECT_LE(s.m2l_high_factored, s.m2l_high);
  EXPECT_FALSE(s.cache_hit);
}
