#pragma once

#include <cstdint>
#include <map>
#include <unordered_map>
#include <vector>

#include "fdbem/interaction_lists.hpp"
#include "fdbem/point_cloud.hpp"
#include "fdbem/svd.hpp"

namespace fdbem {

// p = round(log10(1/epsilon)) + p0.
int points_per_side(double epsilon, int p0);

struct TranslationParams {
  double epsilon = 1e-3;
  int p0 = 1;
  double lf_equiv_scale = 1.05;  // side of LOW outgoing-equivalent / incoming-check cubes, in widths
  double lf_check_scale = 2.95;  // side of LOW outgoing-check / incoming-equivalent cubes
  double hf_cube_scale = 1.05;   // side of the rotated HIGH cube clouds
  int hf_extra_points = 4;       // added to p for the HIGH cube clouds
  int hf_check_extra_points = 4; // added to the HIGH cube p for the frustum clouds
  double max_half_angle = 80.0 * kPi / 180.0;

  int p() const { return points_per_side(epsilon, p0); }
};

// Hashable M2L offset. LOW levels use the integer lattice offset in widths;
// HIGH levels use the offset rotated into the reference frame, quantized to
// 1e-6 widths.
struct OffsetKey {
  std::int64_t x = 0, y = 0, z = 0;
  bool operator==(const OffsetKey&) const = default;
};
struct OffsetKeyHash {
  std::size_t operator()(const OffsetKey& k) const noexcept;
};

struct M2LOperator {
  CMatrix dense;        // K~ = U_dn^H K V_up
  CMatrix left, right;  // second-stage factors, used iff factored
  bool factored = false;
  int second_rank = 0;  // rank r of the second-stage SVD

  // out += K~ in
  void apply(const Eigen::Ref<const CVector>& in, Eigen::Ref<CVector> out) const;
  std::size_t bytes() const;
};

// Compressed operators of one tree level. Clouds are stored relative to the
// cube center; at HIGH levels they live in the reference frame where the
// outgoing direction is +z (world cloud for direction u: rotation(u)^T x + c).
struct LevelOperators {
  int level = 0;
  Regime regime = Regime::Low;
  double width = 0.0;
  int p = 0;

  std::vector<Vec3> out_equiv, out_check, in_equiv, in_check;
  Frustum frustum{};
  int frustum_p = 0;            // lattice points per side of the frustum clouds
  DirectionSet directions;      // HIGH only
  std::vector<Mat3> rotations;  // per outgoing direction, HIGH only

  TruncatedPinv up, dn;
  CMatrix s2m_factor;  // Sigma_up^-1 U_up^H, composes with per-leaf check potentials
  CMatrix l2t_factor;  // V_dn Sigma_dn^-1, composes with per-leaf target evaluations

  std::unordered_map<OffsetKey, M2LOperator, OffsetKeyHash> m2l;
  // Keyed by (parent direction or -1) * 8 + octant; stored on the parent level.
  std::map<int, CMatrix> m2m, l2l;

  int out_rank() const { return up.rank(); }
  int in_rank() const { return dn.rank(); }
  bool high() const { return regime == Regime::High; }
  // Frame of an outgoing direction; an incoming direction v shares the frame
  // of its antipode, so its sources sit along -z.
  Mat3 out_rotation(int direction) const;
  Mat3 in_rotation(int direction) const;

  // Clouds for one cube, in world coordinates.
  std::vector<Vec3> world_out_equiv(const Vec3& c, int direction) const;
  std::vector<Vec3> world_out_check(const Vec3& c, int direction) const;
  std::vector<Vec3> world_in_equiv(const Vec3& c, int direction) const;
  std::vector<Vec3> world_in_check(const Vec3& c, int direction) const;

  std::size_t bytes() const;
};

struct TranslationOperators {
  TranslationParams params;
  std::vector<LevelOperators> levels;

  std::size_t bytes() const;
};

// Plain-kernel matrix G(targets_i, sources_j).
CMatrix kernel_matrix(const std::vector<Vec3>& targets, const std::vector<Vec3>& sources,
                      const WaveContext& ctx);

OffsetKey m2l_key(const LevelOperators& lvl, const Vec3& source_center,
                  const Vec3& target_center, int direction);

// Bases and clouds for one level (no translation tables yet).
LevelOperators build_level_bases(const Octree& tree, const InteractionLists& lists, int level,
                                  const WaveContext& ctx, const TranslationParams& params);

// Adds the M2L operators for every far pair at lvl.level.
void build_m2l_table(LevelOperators& lvl, const Octree& tree, const InteractionLists& lists,
                     const WaveContext& ctx, const TranslationParams& params);

// Bases plus M2L tables for every level; transfer matrices are added on demand.
TranslationOperators build_translation_operators(const Octree& tree,
                                                 const InteractionLists& lists,
                                                 const WaveContext& ctx,
                                                 const TranslationParams& params);

// Transfer between parent level P and child level P+1. parent_direction is -1
// at LOW parents; the child direction follows from the direction child map.
const CMatrix& m2m_operator(LevelOperators& parent, const LevelOperators& child,
                            const InteractionLists& lists, int parent_direction, int octant,
                            const WaveContext& ctx);
const CMatrix& l2l_operator(LevelOperators& parent, const LevelOperators& child,
                            const InteractionLists& lists, int parent_direction, int octant,
                            const WaveContext& ctx);

// Direction of the child matching a parent direction (-1 if the child level is LOW).
int child_direction(const InteractionLists& lists, int parent_level, int parent_direction);

// U_dn K~ V_up^H for one M2L pair, rebuilt from world-frame clouds with fresh
// SVDs. Basis-independent, so it can be compared with the table entry.
CMatrix m2l_projector_direct(const LevelOperators& lvl, const Vec3& source_center,
                             const Vec3& target_center, int direction, const WaveContext& ctx,
                             double epsilon);
CMatrix m2l_projector_table(const LevelOperators& lvl, const OffsetKey& key);

// Center of child `octant` relative to its parent center, in parent widths.
Vec3 octant_offset(int octant);

}  // namespace fdbem
