#include "fdbem/octree.hpp"

#include <algorithm>
#include <iomanip>
#include <ostream>

namespace fdbem {

double Octree::width_at(int level) const {
  return root().width / static_cast<double>(1ull << level);
}

std::vector<int> Octree::leaves_under(int cube) const {
  std::vector<int> out, stack{cube};
  while (!stack.empty()) {
    int c = stack.back();
    stack.pop_back();
    if (cubes[c].is_leaf) {
      out.push_back(c);
      continue;
    }
    for (int i = 7; i >= 0; --i) {
      if (cubes[c].children[i] >= 0) stack.push_back(cubes[c].children[i]);
    }
  }
  return out;
}

RootCube enclosing_cube(const Vec3& lo, const Vec3& hi) {
  const Vec3 center = 0.5 * (lo + hi);
  double width = (hi - lo).maxCoeff();
  if (!(width > 0.0)) width = 1.0;
  return {center, width * (1.0 + 1e-6)};
}

Octree build_octree(std::span<const Vec3> centroids, int max_leaf, std::optional<RootCube> root) {
  if (centroids.empty()) throw Error("build_octree: no centroids");
  if (max_leaf < 1) throw Error("build_octree: max_leaf must be >= 1");

  if (!root) {
    Vec3 lo = centroids.front(), hi = centroids.front();
    for (const auto& p : centroids) {
      lo = lo.cwiseMin(p);
      hi = hi.cwiseMax(p);
    }
    root = enclosing_cube(lo, hi);
  }
  for (const auto& p : centroids) {
    if (((p - root->center).cwiseAbs().array() > 0.5 * root->width).any()) {
      throw Error("build_octree: centroid outside the root cube");
    }
  }

  Octree tree;
  tree.max_leaf = max_leaf;
  tree.order.resize(centroids.size());
  for (std::size_t i = 0; i < centroids.size(); ++i) tree.order[i] = static_cast<int>(i);

  Cube r;
  r.center = root->center;
  r.width = root->width;
  r.begin = 0;
  r.end = centroids.size();
  tree.cubes.push_back(r);
  tree.levels.push_back({0});

  const double min_width = 1e-9 * root->width;
  for (int level = 0; level < kMaxOctreeDepth; ++level) {
    std::vector<int> next;
    for (int id : tree.levels[level]) {
      if (tree.cubes[id].count() <= static_cast<std::size_t>(max_leaf)) continue;
      if (tree.cubes[id].width * 0.5 < min_width) continue;
      const Cube parent = tree.cubes[id];
      auto octant_of = [&](int e) {
        const Vec3& p = centroids[e];
        return (p.x() >= parent.center.x() ? 1 : 0) | (p.y() >= parent.center.y() ? 2 : 0) |
               (p.z() >= parent.center.z() ? 4 : 0);
      };
      auto first = tree.order.begin() + parent.begin;
      auto last = tree.order.begin() + parent.end;
      std::stable_sort(first, last, [&](int a, int b) { return octant_of(a) < octant_of(b); });

      std::size_t pos = parent.begin;
      for (int oct = 0; oct < 8; ++oct) {
        std::size_t stop = pos;
        while (stop < parent.end && octant_of(tree.order[stop]) == oct) ++stop;
        if (stop == pos) continue;
        Cube child;
        child.width = 0.5 * parent.width;
        child.center = parent.center + 0.25 * parent.width *
                                           Vec3((oct & 1) ? 1 : -1, (oct & 2) ? 1 : -1,
                                                (oct & 4) ? 1 : -1);
        child.level = level + 1;
        child.parent = id;
        child.octant = oct;
        child.begin = pos;
        child.end = stop;
        const int cid = static_cast<int>(tree.cubes.size());
        tree.cubes.push_back(child);
        tree.cubes[id].children[oct] = cid;
        tree.cubes[id].is_leaf = false;
        next.push_back(cid);
        pos = stop;
      }
    }
    if (next.empty()) break;
    tree.levels.push_back(std::move(next));
  }

  tree.leaf_of.assign(centroids.size(), -1);
  for (std::size_t c = 0; c < tree.cubes.size(); ++c) {
    if (!tree.cubes[c].is_leaf) continue;
    for (int e : tree.elements(static_cast<int>(c))) tree.leaf_of[e] = static_cast<int>(c);
  }
  return tree;
}

void classify_regimes(Octree& tree, const WaveContext& ctx) {
  const double lambda = ctx.is_static() ? 0.0 : ctx.wavelength();
  for (auto& c : tree.cubes) {
    c.regime = (!ctx.is_static() && c.width >= lambda) ? Regime::High : Regime::Low;
  }
}

void dump_tree(const Octree& tree, std::ostream& out) {
  const auto flags = out.flags();
  out << std::setprecision(10);
  for (const auto& c : tree.cubes) {
    out << c.level << ' ' << c.center.x() << ' ' << c.center.y() << ' ' << c.center.z() << ' '
        << c.width << ' ' << (c.regime == Regime::High ? "HIGH" : "LOW") << ' ' << c.count()
        << '\n';
  }
  out.flags(flags);
}

}  // namespace fdbem
