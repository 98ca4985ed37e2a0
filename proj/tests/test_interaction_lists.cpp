#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "fdbem/interaction_lists.hpp"
#include "fdbem/mesh.hpp"

using namespace fdbem;

namespace {

std::vector<Vec3> sphere_points(int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> g;
  std::vector<Vec3> p(n);
  for (auto& x : p) x = Vec3(g(rng), g(rng), g(rng)).normalized();
  return p;
}

struct Built {
  Octree tree;
  InteractionLists lists;
};

Built build(const std::vector<Vec3>& p, int max_leaf, const WaveContext& ctx) {
  Built b{build_octree(p, max_leaf), {}};
  classify_regimes(b.tree, ctx);
  b.lists = build_interaction_lists(b.tree, ctx);
  return b;
}

// count[a * n + b]: how many list entries account for the ordered pair (a, b).
std::vector<int> pair_counts(const Built& b, std::size_t n) {
  std::vector<int> count(n * n, 0);
  const auto& t = b.tree;
  for (std::size_t c = 0; c < t.cubes.size(); ++c) {
    for (const FarEntry& e : b.lists.far[c]) {
      for (int x : t.elements(static_cast<int>(c))) {
        for (int y : t.elements(e.source)) ++count[x * n + y];
      }
    }
    if (!t.cubes[c].is_leaf) continue;
    for (int s : b.lists.near[c]) {
      for (int x : t.elements(static_cast<int>(c))) {
        for (int y : t.elements(s)) ++count[x * n + y];
      }
    }
  }
  return count;
}

}  // namespace

TEST(InteractionLists, Predicates) {
  const double lambda = 1.0;
  EXPECT_TRUE(high_admissible(Vec3::Zero(), Vec3(4, 0, 0), 1.0, lambda));
  EXPECT_TRUE(high_admissible(Vec3::Zero(), Vec3(3, 0, 0), 1.0, lambda));
  EXPECT_FALSE(high_admissible(Vec3::Zero(), Vec3(2.9, 0, 0), 1.0, lambda));
  // Parabolic separation dominates for wide cubes: w^2 / lambda = 64.
  EXPECT_FALSE(high_admissible(Vec3::Zero(), Vec3(40, 0, 0), 8.0, lambda));
  EXPECT_TRUE(high_admissible(Vec3::Zero(), Vec3(64, 0, 0), 8.0, lambda));
  // Their parents: width 2, centers 4 apart.
  EXPECT_FALSE(high_admissible(Vec3::Zero(), Vec3(4, 0, 0), 2.0, lambda));

  EXPECT_FALSE(low_admissible(Vec3::Zero(), Vec3(1, 0, 0), 1.0));
  EXPECT_FALSE(low_admissible(Vec3::Zero(), Vec3(1, 1, 1), 1.0));
  EXPECT_TRUE(low_admissible(Vec3::Zero(), Vec3(2, 0, 0), 1.0));
  EXPECT_TRUE(low_admissible(Vec3::Zero(), Vec3(2, 1, -1), 1.0));
}

TEST(InteractionLists, AdjacentLeavesAreNear) {
  const std::vector<Vec3> p{Vec3(-0.5, -0.5, -0.5), Vec3(0.5, -0.5, -0.5)};
  const Built b = build(p, 1, WaveContext(0.1));
  const int l0 = b.tree.leaf_of[0], l1 = b.tree.leaf_of[1];
  ASSERT_NE(l0, l1);
  auto has = [](const std::vector<int>& v, int x) {
    return std::find(v.begin(), v.end(), x) != v.end();
  };
  EXPECT_TRUE(has(b.lists.near[l0], l1));
  EXPECT_TRUE(has(b.lists.near[l1], l0));
  EXPECT_TRUE(has(b.lists.near[l0], l0));
  EXPECT_EQ(b.lists.num_far_pairs(), 0u);
}

TEST(InteractionLists, PairCoverageLowFrequency) {
  const auto p = sphere_points(2000, 21);
  const Built b = build(p, 16, WaveContext(0.5));
  for (const auto& d : b.lists.directions) EXPECT_FALSE(d.has_value());
  const auto count = pair_counts(b, p.size());
  for (std::size_t i = 0; i < count.size(); ++i) ASSERT_EQ(count[i], 1) << i;
  EXPECT_GT(b.lists.num_far_pairs(), 0u);
}

TEST(InteractionLists, PairCoverageWithHighLevels) {
  const auto p = sphere_points(2000, 22);
  const WaveContext ctx(8.0 * kPi);  // root ~ 8 wavelengths
  const Built b = build(p, 16, ctx);
  ASSERT_TRUE(b.tree.is_high(0));
  ASSERT_TRUE(b.tree.is_high(2));
  const auto count = pair_counts(b, p.size());
  for (std::size_t i = 0; i < count.size(); ++i) ASSERT_EQ(count[i], 1) << i;
}

TEST(InteractionLists, AdaptiveLeavesKeepCoverage) {
  // A dense cluster next to a sparse region forces leaves at many depths.
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Vec3> p;
  for (int i = 0; i < 1200; ++i) p.emplace_back(0.05 * u(rng) + 0.6, 0.05 * u(rng), 0.05 * u(rng));
  for (int i = 0; i < 300; ++i) p.emplace_back(u(rng), u(rng), u(rng));
  const Built b = build(p, 8, WaveContext(4.0 * kPi));
  const auto count = pair_counts(b, p.size());
  for (std::size_t i = 0; i < count.size(); ++i) ASSERT_EQ(count[i], 1) << i;
}

TEST(InteractionLists, FarEntriesAreAdmissibleSameLevelPairs) {
  const auto p = sphere_points(4000, 24);
  const WaveContext ctx(8.0 * kPi);
  const Built b = build(p, 16, ctx);
  const double lambda = ctx.wavelength();
  for (std::size_t c = 0; c < b.tree.cubes.size(); ++c) {
    const Cube& t = b.tree.cubes[c];
    for (const FarEntry& e : b.lists.far[c]) {
      const Cube& s = b.tree.cubes[e.source];
      ASSERT_EQ(s.level, t.level);
      if (t.regime == Regime::High) {
        EXPECT_TRUE(high_admissible(s.center, t.center, t.width, lambda));
        const auto& set = *b.lists.directions[t.level];
        EXPECT_EQ(e.direction, direction_index(set, s.center, t.center));
        // Parabolic condition at the admissibility distance:
        // aperture * max(3w, w^2/lambda) <= 4w.
        const double w = t.width;
        EXPECT_LE(set.angular_radius() * std::max(3.0 * w, w * w / lambda), 4.0 * w);
      } else {
        EXPECT_TRUE(low_admissible(s.center, t.center, t.width));
        EXPECT_EQ(e.direction, -1);
      }
      // Parents were not admissible (otherwise the pair would sit higher).
      const Cube& sp = b.tree.cubes[s.parent];
      const Cube& tp = b.tree.cubes[t.parent];
      if (tp.regime == Regime::High) {
        EXPECT_FALSE(high_admissible(sp.center, tp.center, tp.width, lambda));
      } else {
        EXPECT_FALSE(low_admissible(sp.center, tp.center, tp.width));
      }
    }
  }
}

// Far pair totals over the sphere family with k doubling per refinement. A
// leaf size of 8 keeps the coarsest member (128 elements) deeper than one level.
TEST(InteractionLists, FarPairCountGrowsNearLinearly) {
  std::vector<double> logn, logc;
  for (int n = 2; n <= 5; ++n) {
    const auto g = compute_element_geometry(generate_sphere_mesh(n, 1.0));
    const WaveContext ctx(kPi * std::pow(2.0, n - 3));
    const Built b = build(g.centroid, 8, ctx);
    ASSERT_GT(b.lists.num_far_pairs(), 0u);
    logn.push_back(std::log(static_cast<double>(g.size())));
    logc.push_back(std::log(static_cast<double>(b.lists.num_far_pairs())));
  }
  const double mx = std::accumulate(logn.begin(), logn.end(), 0.0) / logn.size();
  const double my = std::accumulate(logc.begin(), logc.end(), 0.0) / logc.size();
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < logn.size(); ++i) {
    sxy += (logn[i] - mx) * (logc[i] - my);
    sxx += (logn[i] - mx) * (logn[i] - mx);
  }
  const double slope = sxy / sxx;
  RecordProperty("far_pair_exponent", std::to_string(slope));
  EXPECT_LE(slope, 1.2);
}

TEST(InteractionLists, ListsAreSortedAndDeterministic) {
  const auto p = sphere_points(1500, 25);
  const Built a = build(p, 16, WaveContext(4.0 * kPi));
  const Built b = build(p, 16, WaveContext(4.0 * kPi));
  ASSERT_EQ(a.lists.near.size(), b.lists.near.size());
  for (std::size_t c = 0; c < a.lists.near.size(); ++c) {
    EXPECT_EQ(a.lists.near[c], b.lists.near[c]);
    EXPECT_TRUE(std::is_sorted(a.lists.near[c].begin(), a.lists.near[c].end()));
    ASSERT_EQ(a.lists.far[c].size(), b.lists.far[c].size());
    for (std::size_t i = 0; i < a.lists.far[c].size(); ++i) {
      EXPECT_EQ(a.lists.far[c][i].source, b.lists.far[c][i].source);
      EXPECT_EQ(a.lists.far[c][i].direction, b.lists.far[c][i].direction);
    }
  }
}
