#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "fdbem/kernel.hpp"

namespace fdbem {

enum class Regime { Low, High };

struct Cube {
  Vec3 center;
  double width = 0.0;
  int level = 0;
  int parent = -1;
  int octant = -1;  // position inside the parent: bit 0 = +x, bit 1 = +y, bit 2 = +z
  std::array<int, 8> children{-1, -1, -1, -1, -1, -1, -1, -1};
  // Range into Octree::order holding every element of the subtree.
  std::size_t begin = 0, end = 0;
  bool is_leaf = true;
  Regime regime = Regime::Low;

  std::size_t count() const { return end - begin; }
};

struct RootCube {
  Vec3 center;
  double width;
};

// Adaptive octree over element centroids. Cubes are stored level by level
// (breadth first), so iterating forward is a preorder-compatible sweep and
// iterating backward is postorder-compatible.
class Octree {
 public:
  std::vector<Cube> cubes;
  std::vector<int> order;  // element ids permuted so that cube ranges are contiguous
  std::vector<std::vector<int>> levels;
  std::vector<int> leaf_of;  // element id -> leaf cube id
  int max_leaf = 0;

  const Cube& root() const { return cubes.front(); }
  int depth() const { return static_cast<int>(levels.size()) - 1; }
  double width_at(int level) const;
  std::span<const int> elements(int cube) const {
    const auto& c = cubes[cube];
    return {order.data() + c.begin, c.count()};
  }
  std::vector<int> leaves_under(int cube) const;
  bool is_high(int level) const { return cubes[levels[level].front()].regime == Regime::High; }
};

inline constexpr int kMaxOctreeDepth = 30;

// Subdivides any cube holding more than max_leaf centroids; empty children are
// dropped. The root is the bounding cube of the centroids unless given.
Octree build_octree(std::span<const Vec3> centroids, int max_leaf,
                    std::optional<RootCube> root = std::nullopt);

// Root cube enclosing an axis-aligned box, enlarged by a relative 1e-6 so no
// point sits on its boundary.
RootCube enclosing_cube(const Vec3& lo, const Vec3& hi);

// HIGH iff width >= wavelength (inclusive). k = 0 leaves everything LOW.
void classify_regimes(Octree& tree, const WaveContext& ctx);

// One cube per line: level, center xyz, width, regime, element count.
void dump_tree(const Octree& tree, std::ostream& out);

}  // namespace fdbem
