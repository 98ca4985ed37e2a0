#pragma once

#include <optional>
#include <span>
#include <vector>

#include "fdbem/operator_cache.hpp"
#include "fdbem/quadrature.hpp"
#include "fdbem/translation.hpp"

namespace fdbem {

// The two Burton-Miller operators. Both share the target stage G + alpha dG/dn_x.
enum class OperatorKind { Lhs, Rhs };

constexpr KernelKind moment_kernel(OperatorKind k) {
  return k == OperatorKind::Lhs ? KernelKind::DlpY : KernelKind::Single;
}
constexpr KernelKind near_kernel(OperatorKind k) {
  return k == OperatorKind::Lhs ? KernelKind::NearLhs : KernelKind::NearRhs;
}

struct EngineOptions {
  int max_leaf = 32;
  TranslationParams translation;
  NearFieldPolicy near_policy;
  std::optional<RootCube> root;  // defaults to the bounding cube of the vertices
  // Translation operators are read from / written to this file when set.
  std::filesystem::path cache_file;
  CacheKey cache_key;
};

struct EngineStats {
  std::size_t cubes = 0, leaves = 0, levels = 0, high_levels = 0;
  std::size_t far_pairs = 0, near_pairs = 0;
  std::size_t out_slots = 0, in_slots = 0;
  std::size_t m2l_operators = 0, m2l_high = 0, m2l_high_factored = 0;
  bool cache_hit = false;
};

// Matrix-free Burton-Miller operators on a closed surface. `geometry` must use
// the integral-equation normals (see bie_geometry) and outlive the engine.
class FdaEngine {
 public:
  FdaEngine(const ElementGeometry& geometry, const WaveContext& ctx, const EngineOptions& opt);

  // Near blocks and leaf source factors for the given kinds; one quadrature
  // pass serves all of them.
  void precompute(std::span<const OperatorKind> kinds);
  bool ready(OperatorKind kind) const { return kinds_[index(kind)].ready; }

  CVector apply(OperatorKind kind, const CVector& q) const;

  const Octree& tree() const { return tree_; }
  const InteractionLists& lists() const { return lists_; }
  const TranslationOperators& operators() const { return ops_; }
  const WaveContext& context() const { return ctx_; }
  std::size_t size() const { return geom_.size(); }
  EngineStats stats() const;

  // Accounted allocations: translation tables, leaf factors and near blocks.
  std::size_t memory_bytes() const;

  // Dense near block of leaf `leaf` (targets x near sources) for tests.
  const CMatrix& near_block(OperatorKind kind, int leaf) const;
  const std::vector<int>& near_sources(int leaf) const { return near_src_[leaf]; }

 private:
  struct Slot {
    int cube, direction;
    std::size_t offset, dim;
  };
  struct Transfer {
    int from, to;  // slots
    const CMatrix* op;
  };
  struct Translation {
    int from, to;
    const M2LOperator* op;
  };
  struct LeafFactor {
    int leaf, slot;
    CMatrix m;
  };
  struct KindData {
    bool ready = false;
    std::vector<LeafFactor> s2m;
    std::vector<CMatrix> near;  // per cube, empty for non-leaves
  };

  static int index(OperatorKind k) { return k == OperatorKind::Lhs ? 0 : 1; }
  int find_slot(const std::vector<std::vector<int>>& slots, int cube, int dir,
                const std::vector<Slot>& table) const;
  void build_schedule();

  const ElementGeometry& geom_;
  WaveContext ctx_;
  EngineOptions opt_;
  Octree tree_;
  InteractionLists lists_;
  TranslationOperators ops_;

  std::vector<Slot> out_slots_, in_slots_;
  std::vector<std::vector<int>> out_of_cube_, in_of_cube_;  // slot ids per cube
  std::size_t out_size_ = 0, in_size_ = 0;
  std::vector<Transfer> m2m_, l2l_;
  std::vector<Translation> m2l_;
  std::vector<LeafFactor> l2t_;
  std::vector<std::vector<int>> near_src_;  // per leaf: concatenated source elements
  KindData kinds_[2];
  bool cache_hit_ = false;
};

}  // namespace fdbem
