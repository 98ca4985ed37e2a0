#pragma once

#include <optional>
#include <vector>

#include "fdbem/directions.hpp"
#include "fdbem/octree.hpp"

namespace fdbem {

struct FarEntry {
  int source;     // cube at the target's level
  int direction;  // outgoing direction of `source` toward the target; -1 at LOW levels
};

struct InteractionLists {
  // near[b]: source leaves whose elements interact directly with leaf b (b included).
  std::vector<std::vector<int>> near;
  // far[b]: same-level source cubes translated into b by M2L.
  std::vector<std::vector<FarEntry>> far;
  // Direction set per level; engaged exactly at HIGH levels.
  std::vector<std::optional<DirectionSet>> directions;

  std::size_t num_far_pairs() const;
  std::size_t num_near_pairs() const;
};

// Same-level separation tests. LOW: not touching (one-cube buffer). HIGH:
// centers at least max(3w, w^2/lambda) apart.
bool low_admissible(const Vec3& a, const Vec3& b, double width);
bool high_admissible(const Vec3& a, const Vec3& b, double width, double wavelength);

// Dual traversal from (root, root). A same-level pair that is not admissible
// is refined into its children pairs; once either side is a leaf, every leaf
// pair below it goes to the near lists. Every ordered element pair is thus
// covered exactly once.
InteractionLists build_interaction_lists(const Octree& tree, const WaveContext& ctx);

}  // namespace fdbem
