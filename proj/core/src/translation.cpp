#include "fdbem/translation.hpp"

#include <algorithm>
#include <cmath>

namespace fdbem {

int points_per_side(double epsilon, int p0) {
  if (!(epsilon > 0.0) || !(epsilon < 1.0)) throw Error("epsilon must lie in (0, 1)");
  const int p = static_cast<int>(std::lround(std::log10(1.0 / epsilon))) + p0;
  if (p < 2) throw Error("points per side must be >= 2");
  return p;
}

std::size_t OffsetKeyHash::operator()(const OffsetKey& k) const noexcept {
  std::uint64_t h = 1469598103934665603ull;
  for (std::int64_t v : {k.x, k.y, k.z}) {
    h ^= static_cast<std::uint64_t>(v) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  }
  return static_cast<std::size_t>(h);
}

void M2LOperator::apply(const Eigen::Ref<const CVector>& in, Eigen::Ref<CVector> out) const {
  if (factored) {
    out.noalias() += left * (right * in);
  } else {
    out.noalias() += dense * in;
  }
}

std::size_t M2LOperator::bytes() const {
  const auto n = factored ? left.size() + right.size() : dense.size();
  return static_cast<std::size_t>(n) * sizeof(Complex);
}

Vec3 octant_offset(int octant) {
  return 0.25 * Vec3((octant & 1) ? 1 : -1, (octant & 2) ? 1 : -1, (octant & 4) ? 1 : -1);
}

Mat3 LevelOperators::out_rotation(int direction) const {
  if (!high() || direction < 0) return Mat3::Identity();
  return rotations.at(direction);
}

Mat3 LevelOperators::in_rotation(int direction) const {
  if (!high() || direction < 0) return Mat3::Identity();
  return rotations.at(directions.antipode(direction));
}

std::vector<Vec3> LevelOperators::world_out_equiv(const Vec3& c, int direction) const {
  return place(out_equiv, out_rotation(direction), c);
}
std::vector<Vec3> LevelOperators::world_out_check(const Vec3& c, int direction) const {
  return place(out_check, out_rotation(direction), c);
}
std::vector<Vec3> LevelOperators::world_in_equiv(const Vec3& c, int direction) const {
  return place(in_equiv, in_rotation(direction), c);
}
std::vector<Vec3> LevelOperators::world_in_check(const Vec3& c, int direction) const {
  return place(in_check, in_rotation(direction), c);
}

namespace {

std::size_t matrix_bytes(const CMatrix& m) { return static_cast<std::size_t>(m.size()) * 16; }

std::size_t pinv_bytes(const TruncatedPinv& p) {
  return matrix_bytes(p.V) + matrix_bytes(p.U) + static_cast<std::size_t>(p.inv_sigma.size()) * 8;
}

}  // namespace

std::size_t LevelOperators::bytes() const {
  std::size_t n = pinv_bytes(up) + pinv_bytes(dn) + matrix_bytes(s2m_factor) +
                  matrix_bytes(l2t_factor);
  for (const auto& [key, op] : m2l) n += op.bytes();
  for (const auto& [key, m] : m2m) n += matrix_bytes(m);
  for (const auto& [key, m] : l2l) n += matrix_bytes(m);
  return n;
}

std::size_t TranslationOperators::bytes() const {
  std::size_t n = 0;
  for (const auto& l : levels) n += l.bytes();
  return n;
}

CMatrix kernel_matrix(const std::vector<Vec3>& targets, const std::vector<Vec3>& sources,
                      const WaveContext& ctx) {
  CMatrix m(targets.size(), sources.size());
  const double k = ctx.k();
  for (std::size_t j = 0; j < sources.size(); ++j) {
    for (std::size_t i = 0; i < targets.size(); ++i) {
      const double r = (targets[i] - sources[j]).norm();
      if (!(r > 0.0)) throw Error("kernel_matrix: coincident points");
      m(i, j) = Complex(std::cos(k * r), std::sin(k * r)) / (4.0 * kPi * r);
    }
  }
  return m;
}

OffsetKey m2l_key(const LevelOperators& lvl, const Vec3& source_center,
                  const Vec3& target_center, int direction) {
  const Vec3 off = (target_center - source_center) / lvl.width;
  if (!lvl.high()) {
    return {std::llround(off.x()), std::llround(off.y()), std::llround(off.z())};
  }
  const Vec3 r = lvl.out_rotation(direction) * off * 1e6;
  return {std::llround(r.x()), std::llround(r.y()), std::llround(r.z())};
}

LevelOperators build_level_bases(const Octree& tree, const InteractionLists& lists, int level,
                                 const WaveContext& ctx, const TranslationParams& params) {
  LevelOperators lvl;
  lvl.level = level;
  lvl.width = tree.width_at(level);
  lvl.regime = tree.is_high(level) ? Regime::High : Regime::Low;
  lvl.p = params.p();
  const double w = lvl.width;
  const Vec3 origin = Vec3::Zero();

  if (!lvl.high()) {
    lvl.out_equiv = cube_surface_points(origin, w, lvl.p, params.lf_equiv_scale);
    lvl.out_check = cube_surface_points(origin, w, lvl.p, params.lf_check_scale);
    lvl.in_equiv = lvl.out_check;
    lvl.in_check = lvl.out_equiv;
  } else {
    lvl.directions = *lists.directions.at(level);
    lvl.rotations.reserve(lvl.directions.size());
    for (const auto& d : lvl.directions.directions()) lvl.rotations.push_back(rotation_for(d));

    // A fixed p cannot resolve the directional field once the lattice
    // spacing exceeds a wavelength; HIGH levels get a finer lattice and the
    // truncated SVD keeps the rank bounded.
    lvl.p += params.hf_extra_points;
    lvl.out_equiv = cube_surface_points(origin, w, lvl.p, params.hf_cube_scale);
    lvl.in_check = lvl.out_equiv;
    // Targets of an admissible pair sit at least d_min away; their clouds
    // reach r_eq around their centers.
    const double lambda = ctx.wavelength();
    const double r_eq = 0.5 * std::sqrt(3.0) * params.hf_cube_scale * w;
    const double d_min = std::max(3.0 * w, w * w / lambda);
    const double root_diameter = std::sqrt(3.0) * tree.root().width;
    lvl.frustum.rho_min = d_min - r_eq;
    lvl.frustum.rho_max = std::max(root_diameter + 2.0 * w, 2.0 * lvl.frustum.rho_min);
    lvl.frustum.half_angle =
        std::min(params.max_half_angle,
                 lvl.directions.angular_radius() + std::asin(std::min(1.0, r_eq / d_min)));
    lvl.frustum_p = lvl.p + params.hf_check_extra_points;
    lvl.out_check = reference_frustum_points(lvl.frustum_p, lvl.frustum);
    lvl.in_equiv = lvl.out_check;
    for (auto& x : lvl.in_equiv) x.z() = -x.z();
  }

  lvl.up = truncated_pinv(kernel_matrix(lvl.out_check, lvl.out_equiv, ctx), params.epsilon);
  lvl.dn = truncated_pinv(kernel_matrix(lvl.in_check, lvl.in_equiv, ctx), params.epsilon);
  lvl.s2m_factor = lvl.up.inv_sigma.asDiagonal() * lvl.up.U.adjoint();
  lvl.l2t_factor = lvl.dn.V * lvl.dn.inv_sigma.asDiagonal();
  return lvl;
}

namespace {

M2LOperator make_m2l(const LevelOperators& lvl, const Vec3& reference_offset,
                     const WaveContext& ctx, double epsilon) {
  std::vector<Vec3> targets = lvl.in_check;
  for (auto& x : targets) x += reference_offset;
  const CMatrix k = kernel_matrix(targets, lvl.out_equiv, ctx);
  M2LOperator op;
  op.dense = lvl.dn.U.adjoint() * k * lvl.up.V;
  const LowRank lr = truncated_factor(op.dense, epsilon);
  op.second_rank = lr.rank();
  const auto dim = std::min(op.dense.rows(), op.dense.cols());
  if (2 * op.second_rank < dim) {
    op.factored = true;
    op.left = lr.left;
    op.right = lr.right;
    op.dense.resize(0, 0);
  }
  return op;
}

}  // namespace

void build_m2l_table(LevelOperators& lvl, const Octree& tree, const InteractionLists& lists,
                     const WaveContext& ctx, const TranslationParams& params) {
  for (int target : tree.levels.at(lvl.level)) {
    const Vec3& tc = tree.cubes[target].center;
    for (const FarEntry& e : lists.far[target]) {
      const Vec3& sc = tree.cubes[e.source].center;
      const OffsetKey key = m2l_key(lvl, sc, tc, e.direction);
      if (lvl.m2l.count(key)) continue;
      const Vec3 off = lvl.out_rotation(e.direction) * (tc - sc);
      lvl.m2l.emplace(key, make_m2l(lvl, off, ctx, params.epsilon));
    }
  }
}

TranslationOperators build_translation_operators(const Octree& tree,
                                                 const InteractionLists& lists,
                                                 const WaveContext& ctx,
                                                 const TranslationParams& params) {
  TranslationOperators ops;
  ops.params = params;
  for (int l = 0; l <= tree.depth(); ++l) {
    ops.levels.push_back(build_level_bases(tree, lists, l, ctx, params));
    build_m2l_table(ops.levels.back(), tree, lists, ctx, params);
  }
  return ops;
}

int child_direction(const InteractionLists& lists, int parent_level, int parent_direction) {
  const auto& child_set = lists.directions.at(parent_level + 1);
  if (!child_set) return -1;
  return lists.directions.at(parent_level)->coarser(parent_direction);
}

const CMatrix& m2m_operator(LevelOperators& parent, const LevelOperators& child,
                            const InteractionLists& lists, int parent_direction, int octant,
                            const WaveContext& ctx) {
  const int key = (parent_direction + 1) * 8 + octant;
  auto it = parent.m2m.find(key);
  if (it != parent.m2m.end()) return it->second;
  const int cdir = child_direction(lists, parent.level, parent_direction);
  const Vec3 offset = parent.width * octant_offset(octant);
  const CMatrix e = kernel_matrix(parent.world_out_check(Vec3::Zero(), parent_direction),
                                  child.world_out_equiv(offset, cdir), ctx);
  return parent.m2m.emplace(key, parent.s2m_factor * e * child.up.V).first->second;
}

const CMatrix& l2l_operator(LevelOperators& parent, const LevelOperators& child,
                            const InteractionLists& lists, int parent_direction, int octant,
                            const WaveContext& ctx) {
  const int key = (parent_direction + 1) * 8 + octant;
  auto it = parent.l2l.find(key);
  if (it != parent.l2l.end()) return it->second;
  const int cdir = child_direction(lists, parent.level, parent_direction);
  const Vec3 offset = parent.width * octant_offset(octant);
  const CMatrix e = kernel_matrix(child.world_in_check(offset, cdir),
                                  parent.world_in_equiv(Vec3::Zero(), parent_direction), ctx);
  return parent.l2l.emplace(key, child.dn.U.adjoint() * e * parent.l2t_factor).first->second;
}

CMatrix m2l_projector_direct(const LevelOperators& lvl, const Vec3& source_center,
                             const Vec3& target_center, int direction, const WaveContext& ctx,
                             double epsilon) {
  const auto out_equiv = lvl.world_out_equiv(source_center, direction);
  std::vector<Vec3> out_check, in_equiv;
  if (lvl.high()) {
    const Vec3& u = lvl.directions.direction(direction);
    out_check = directional_check_cloud(source_center, u, lvl.frustum_p, lvl.frustum);
    in_equiv = directional_check_cloud(target_center, -u, lvl.frustum_p, lvl.frustum);
  } else {
    out_check = lvl.world_out_check(source_center, -1);
    in_equiv = lvl.world_in_equiv(target_center, -1);
  }
  const int in_dir = lvl.high() ? lvl.directions.antipode(direction) : -1;
  const auto in_check = lvl.world_in_check(target_center, in_dir);

  const TruncatedPinv up = truncated_pinv(kernel_matrix(out_check, out_equiv, ctx), epsilon);
  const TruncatedPinv dn = truncated_pinv(kernel_matrix(in_check, in_equiv, ctx), epsilon);
  const CMatrix k = kernel_matrix(in_check, out_equiv, ctx);
  return (dn.U * (dn.U.adjoint() * k * up.V)) * up.V.adjoint();
}

CMatrix m2l_projector_table(const LevelOperators& lvl, const OffsetKey& key) {
  const auto it = lvl.m2l.find(key);
  if (it == lvl.m2l.end()) throw Error("m2l_projector_table: missing key");
  const M2LOperator& op = it->second;
  const CMatrix kt = op.factored ? CMatrix(op.left * op.right) : op.dense;
  return lvl.dn.U * kt * lvl.up.V.adjoint();
}

}  // namespace fdbem
