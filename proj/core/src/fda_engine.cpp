#include "fdbem/fda_engine.hpp"

#include <algorithm>
#include <set>

namespace fdbem {
namespace {

RootCube vertex_cube(const ElementGeometry& g) {
  Vec3 lo = g.triangles.front().a, hi = lo;
  for (const auto& t : g.triangles) {
    for (const Vec3* v : {&t.a, &t.b, &t.c}) {
      lo = lo.cwiseMin(*v);
      hi = hi.cwiseMax(*v);
    }
  }
  return enclosing_cube(lo, hi);
}

std::size_t bytes_of(const CMatrix& m) { return static_cast<std::size_t>(m.size()) * 16; }

}  // namespace

FdaEngine::FdaEngine(const ElementGeometry& geometry, const WaveContext& ctx,
                     const EngineOptions& opt)
    : geom_(geometry), ctx_(ctx), opt_(opt) {
  if (geom_.size() == 0) throw Error("FdaEngine: empty geometry");
  if (ctx_.is_static()) throw Error("FdaEngine: wavenumber must be positive");
  tree_ = build_octree(geom_.centroid, opt_.max_leaf, opt_.root ? *opt_.root : vertex_cube(geom_));
  classify_regimes(tree_, ctx_);
  lists_ = build_interaction_lists(tree_, ctx_);
  if (!opt_.cache_file.empty()) {
    if (auto cached = load_operator_cache(opt_.cache_file, opt_.cache_key)) {
      if (cached->levels.size() == tree_.levels.size()) {
        ops_ = std::move(*cached);
        cache_hit_ = true;
      }
    }
  }
  if (!cache_hit_) ops_ = build_translation_operators(tree_, lists_, ctx_, opt_.translation);
  build_schedule();
  if (!opt_.cache_file.empty() && !cache_hit_) {
    save_operator_cache(opt_.cache_file, opt_.cache_key, ops_);
  }
}

int FdaEngine::find_slot(const std::vector<std::vector<int>>& slots, int cube, int dir,
                         const std::vector<Slot>& table) const {
  const auto& ids = slots[cube];
  auto it = std::lower_bound(ids.begin(), ids.end(), dir,
                             [&](int id, int d) { return table[id].direction < d; });
  if (it == ids.end() || table[*it].direction != dir) {
    throw Error("FdaEngine: missing state slot");
  }
  return *it;
}

void FdaEngine::build_schedule() {
  const std::size_t nc = tree_.cubes.size();
  std::vector<std::set<int>> out_need(nc), in_need(nc);
  for (std::size_t t = 0; t < nc; ++t) {
    const int level = tree_.cubes[t].level;
    for (const FarEntry& e : lists_.far[t]) {
      out_need[e.source].insert(e.direction);
      in_need[t].insert(e.direction < 0 ? -1 : lists_.directions[level]->antipode(e.direction));
    }
  }
  auto propagate = [&](std::vector<std::set<int>>& need) {
    for (int l = 0; l < tree_.depth(); ++l) {
      for (int c : tree_.levels[l]) {
        for (int d : need[c]) {
          const int cd = d < 0 ? -1 : child_direction(lists_, l, d);
          for (int ch : tree_.cubes[c].children) {
            if (ch >= 0) need[ch].insert(cd);
          }
        }
      }
    }
  };
  propagate(out_need);
  propagate(in_need);

  auto assign = [&](const std::vector<std::set<int>>& need, std::vector<Slot>& table,
                    std::vector<std::vector<int>>& of_cube, std::size_t& total, bool out) {
    of_cube.assign(nc, {});
    for (std::size_t c = 0; c < nc; ++c) {
      const auto& lvl = ops_.levels[tree_.cubes[c].level];
      const std::size_t dim = out ? lvl.out_rank() : lvl.in_rank();
      for (int d : need[c]) {
        of_cube[c].push_back(static_cast<int>(table.size()));
        table.push_back({static_cast<int>(c), d, total, dim});
        total += dim;
      }
    }
  };
  assign(out_need, out_slots_, out_of_cube_, out_size_, true);
  assign(in_need, in_slots_, in_of_cube_, in_size_, false);

  // Upward transfers, deepest level first.
  for (int l = tree_.depth(); l >= 1; --l) {
    for (int c : tree_.levels[l]) {
      const Cube& cube = tree_.cubes[c];
      for (int ps : out_of_cube_[cube.parent]) {
        const int d = out_slots_[ps].direction;
        const int cd = d < 0 ? -1 : child_direction(lists_, l - 1, d);
        const CMatrix& op =
            m2m_operator(ops_.levels[l - 1], ops_.levels[l], lists_, d, cube.octant, ctx_);
        m2m_.push_back({find_slot(out_of_cube_, c, cd, out_slots_), ps, &op});
      }
    }
  }

  for (std::size_t t = 0; t < nc; ++t) {
    const int level = tree_.cubes[t].level;
    auto& lvl = ops_.levels[level];
    for (const FarEntry& e : lists_.far[t]) {
      const int in_dir = e.direction < 0 ? -1 : lvl.directions.antipode(e.direction);
      const OffsetKey key = m2l_key(lvl, tree_.cubes[e.source].center, tree_.cubes[t].center,
                                    e.direction);
      const auto it = lvl.m2l.find(key);
      if (it == lvl.m2l.end()) throw Error("FdaEngine: M2L table miss");
      m2l_.push_back({find_slot(out_of_cube_, e.source, e.direction, out_slots_),
                      find_slot(in_of_cube_, static_cast<int>(t), in_dir, in_slots_),
                      &it->second});
    }
  }
  std::stable_sort(m2l_.begin(), m2l_.end(),
                   [](const Translation& a, const Translation& b) { return a.to < b.to; });

  // Downward transfers, shallowest level first.
  for (int l = 1; l <= tree_.depth(); ++l) {
    for (int c : tree_.levels[l]) {
      const Cube& cube = tree_.cubes[c];
      for (int ps : in_of_cube_[cube.parent]) {
        const int d = in_slots_[ps].direction;
        const int cd = d < 0 ? -1 : child_direction(lists_, l - 1, d);
        const CMatrix& op =
            l2l_operator(ops_.levels[l - 1], ops_.levels[l], lists_, d, cube.octant, ctx_);
        l2l_.push_back({ps, find_slot(in_of_cube_, c, cd, in_slots_), &op});
      }
    }
  }

  // Leaf target factors: G + alpha dG/dn_x from incoming equivalent points.
  const Complex alpha = ctx_.alpha();
  near_src_.assign(nc, {});
  for (std::size_t c = 0; c < nc; ++c) {
    const Cube& cube = tree_.cubes[c];
    if (!cube.is_leaf) continue;
    const auto elems = tree_.elements(static_cast<int>(c));
    const auto& lvl = ops_.levels[cube.level];
    for (int s : in_of_cube_[c]) {
      const auto pts = lvl.world_in_equiv(cube.center, in_slots_[s].direction);
      CMatrix e(elems.size(), pts.size());
      for (std::size_t i = 0; i < elems.size(); ++i) {
        const Vec3& x = geom_.centroid[elems[i]];
        const Vec3& nx = geom_.normal[elems[i]];
        for (std::size_t j = 0; j < pts.size(); ++j) {
          const Vec3 d = x - pts[j];
          const auto rad = detail::radial(d.norm(), ctx_.k(), false);
          e(i, j) = detail::combine(KernelKind::TargetCombined, d, rad, nx, nx, alpha);
        }
      }
      l2t_.push_back({static_cast<int>(c), s, e * lvl.l2t_factor});
    }
    for (int src : lists_.near[c]) {
      const auto se = tree_.elements(src);
      near_src_[c].insert(near_src_[c].end(), se.begin(), se.end());
    }
  }
}

void FdaEngine::precompute(std::span<const OperatorKind> kinds) {
  std::vector<OperatorKind> todo;
  for (auto k : kinds) {
    if (!kinds_[index(k)].ready &&
        std::find(todo.begin(), todo.end(), k) == todo.end()) {
      todo.push_back(k);
    }
  }
  if (todo.empty()) return;
  std::vector<KernelKind> moments, nears;
  for (auto k : todo) {
    moments.push_back(moment_kernel(k));
    nears.push_back(near_kernel(k));
  }
  std::vector<Complex> buf(todo.size());
  const std::size_t nc = tree_.cubes.size();
  for (auto k : todo) kinds_[index(k)].near.assign(nc, CMatrix());

  for (std::size_t c = 0; c < nc; ++c) {
    const Cube& cube = tree_.cubes[c];
    if (!cube.is_leaf) continue;
    const auto elems = tree_.elements(static_cast<int>(c));
    const auto& lvl = ops_.levels[cube.level];

    for (int s : out_of_cube_[c]) {
      const auto pts = lvl.world_out_check(cube.center, out_slots_[s].direction);
      std::vector<CMatrix> e(todo.size(), CMatrix(pts.size(), elems.size()));
      for (std::size_t j = 0; j < elems.size(); ++j) {
        const int el = elems[j];
        for (std::size_t i = 0; i < pts.size(); ++i) {
          element_integrals(geom_.triangles[el], geom_.normal[el], pts[i], geom_.normal[el],
                            moments, ctx_, buf, default_rule(), opt_.near_policy);
          for (std::size_t n = 0; n < todo.size(); ++n) e[n](i, j) = buf[n];
        }
      }
      for (std::size_t n = 0; n < todo.size(); ++n) {
        kinds_[index(todo[n])].s2m.push_back({static_cast<int>(c), s, lvl.s2m_factor * e[n]});
      }
    }

    const auto& src = near_src_[c];
    std::vector<CMatrix> blocks(todo.size(), CMatrix(elems.size(), src.size()));
    for (std::size_t j = 0; j < src.size(); ++j) {
      for (std::size_t i = 0; i < elems.size(); ++i) {
        collocation_entries(geom_, elems[i], src[j], nears, ctx_, buf, opt_.near_policy);
        for (std::size_t n = 0; n < todo.size(); ++n) blocks[n](i, j) = buf[n];
      }
    }
    for (std::size_t n = 0; n < todo.size(); ++n) {
      kinds_[index(todo[n])].near[c] = std::move(blocks[n]);
    }
  }
  for (auto k : todo) kinds_[index(k)].ready = true;
}

CVector FdaEngine::apply(OperatorKind kind, const CVector& q) const {
  const KindData& data = kinds_[index(kind)];
  if (!data.ready) throw Error("FdaEngine::apply: kind not precomputed");
  if (static_cast<std::size_t>(q.size()) != geom_.size()) {
    throw Error("FdaEngine::apply: charge vector length mismatch");
  }
  CVector out = CVector::Zero(out_size_);
  CVector in = CVector::Zero(in_size_);
  CVector p = CVector::Zero(q.size());
  CVector local;

  auto gather = [&](std::span<const int> idx) -> const CVector& {
    local.resize(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) local[i] = q[idx[i]];
    return local;
  };

  for (const auto& f : data.s2m) {
    const Slot& s = out_slots_[f.slot];
    out.segment(s.offset, s.dim).noalias() += f.m * gather(tree_.elements(f.leaf));
  }
  for (const auto& t : m2m_) {
    const Slot& a = out_slots_[t.from];
    const Slot& b = out_slots_[t.to];
    out.segment(b.offset, b.dim).noalias() += *t.op * out.segment(a.offset, a.dim);
  }
  for (const auto& t : m2l_) {
    const Slot& a = out_slots_[t.from];
    const Slot& b = in_slots_[t.to];
    t.op->apply(out.segment(a.offset, a.dim), in.segment(b.offset, b.dim));
  }
  for (const auto& t : l2l_) {
    const Slot& a = in_slots_[t.from];
    const Slot& b = in_slots_[t.to];
    in.segment(b.offset, b.dim).noalias() += *t.op * in.segment(a.offset, a.dim);
  }
  CVector tmp;
  for (const auto& f : l2t_) {
    const Slot& s = in_slots_[f.slot];
    tmp.noalias() = f.m * in.segment(s.offset, s.dim);
    const auto elems = tree_.elements(f.leaf);
    for (std::size_t i = 0; i < elems.size(); ++i) p[elems[i]] += tmp[i];
  }
  for (std::size_t c = 0; c < tree_.cubes.size(); ++c) {
    if (!tree_.cubes[c].is_leaf) continue;
    tmp.noalias() = data.near[c] * gather(near_src_[c]);
    const auto elems = tree_.elements(static_cast<int>(c));
    for (std::size_t i = 0; i < elems.size(); ++i) p[elems[i]] += tmp[i];
  }
  return p;
}

const CMatrix& FdaEngine::near_block(OperatorKind kind, int leaf) const {
  const KindData& data = kinds_[index(kind)];
  if (!data.ready) throw Error("near_block: kind not precomputed");
  return data.near.at(leaf);
}

EngineStats FdaEngine::stats() const {
  EngineStats s;
  s.cubes = tree_.cubes.size();
  for (const auto& c : tree_.cubes) s.leaves += c.is_leaf ? 1 : 0;
  s.levels = tree_.levels.size();
  for (const auto& l : ops_.levels) {
    s.m2l_operators += l.m2l.size();
    if (!l.high()) continue;
    ++s.high_levels;
    s.m2l_high += l.m2l.size();
    for (const auto& [key, op] : l.m2l) s.m2l_high_factored += op.factored ? 1 : 0;
  }
  s.far_pairs = lists_.num_far_pairs();
  s.near_pairs = lists_.num_near_pairs();
  s.out_slots = out_slots_.size();
  s.in_slots = in_slots_.size();
  s.cache_hit = cache_hit_;
  return s;
}

std::size_t FdaEngine::memory_bytes() const {
  std::size_t n = ops_.bytes();
  for (const auto& f : l2t_) n += bytes_of(f.m);
  for (const auto& k : kinds_) {
    for (const auto& f : k.s2m) n += bytes_of(f.m);
    for (const auto& b : k.near) n += bytes_of(b);
  }
  return n;
}

}  // namespace fdbem
