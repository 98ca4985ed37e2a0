#include "fdbem/interaction_lists.hpp"

#include <algorithm>

namespace fdbem {

std::size_t InteractionLists::num_far_pairs() const {
  std::size_t n = 0;
  for (const auto& f : far) n += f.size();
  return n;
}

std::size_t InteractionLists::num_near_pairs() const {
  std::size_t n = 0;
  for (const auto& l : near) n += l.size();
  return n;
}

bool low_admissible(const Vec3& a, const Vec3& b, double width) {
  // Same-level centers differ by integer multiples of the width.
  return (a - b).cwiseAbs().maxCoeff() > 1.5 * width;
}

bool high_admissible(const Vec3& a, const Vec3& b, double width, double wavelength) {
  const double threshold = std::max(3.0 * width, width * width / wavelength);
  return (a - b).norm() >= threshold * (1.0 - 1e-12);
}

namespace {

struct Builder {
  const Octree& tree;
  const WaveContext& ctx;
  InteractionLists& out;

  bool admissible(int b, int c) const {
    const Cube& B = tree.cubes[b];
    const Cube& C = tree.cubes[c];
    if (B.regime == Regime::High) {
      return high_admissible(B.center, C.center, B.width, ctx.wavelength());
    }
    return low_admissible(B.center, C.center, B.width);
  }

  void add_near(int b, int c) {
    const auto targets = tree.leaves_under(b);
    const auto sources = tree.leaves_under(c);
    for (int t : targets) {
      auto& list = out.near[t];
      list.insert(list.end(), sources.begin(), sources.end());
    }
  }

  void visit(int b, int c) {
    const Cube& B = tree.cubes[b];
    const Cube& C = tree.cubes[c];
    if (B.is_leaf || C.is_leaf) {
      add_near(b, c);
      return;
    }
    for (int cb : B.children) {
      if (cb < 0) continue;
      for (int cc : C.children) {
        if (cc < 0) continue;
        if (cb != cc && admissible(cb, cc)) {
          const Cube& child = tree.cubes[cb];
          int dir = -1;
          if (child.regime == Regime::High) {
            dir = direction_index(*out.directions[child.level], tree.cubes[cc].center,
                                  child.center);
          }
          out.far[cb].push_back({cc, dir});
        } else {
          visit(cb, cc);
        }
      }
    }
  }
};

}  // namespace

InteractionLists build_interaction_lists(const Octree& tree, const WaveContext& ctx) {
  InteractionLists lists;
  lists.near.resize(tree.cubes.size());
  lists.far.resize(tree.cubes.size());
  lists.directions.resize(tree.levels.size());
  for (std::size_t l = 0; l < tree.levels.size(); ++l) {
    if (tree.is_high(static_cast<int>(l))) {
      lists.directions[l] = make_direction_set(tree.width_at(static_cast<int>(l)), ctx);
    }
  }
  Builder{tree, ctx, lists}.visit(0, 0);
  for (auto& l : lists.near) std::sort(l.begin(), l.end());
  for (auto& f : lists.far) {
    std::sort(f.begin(), f.end(), [](const FarEntry& a, const FarEntry& b) {
      return a.source < b.source;
    });
  }
  return lists;
}

}  // namespace fdbem
