#include "fdbem/operator_cache.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <tuple>

namespace fdbem {
namespace {

constexpr std::array<char, 8> kMagic{'F', 'D', 'B', 'E', 'M', 'O', 'P', 'S'};

class Writer {
 public:
  explicit Writer(const std::filesystem::path& p) : out_(p, std::ios::binary) {
    if (!out_) throw Error("cannot write operator cache: " + p.string());
  }
  void u64(std::uint64_t v) {
    char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    out_.write(b, 8);
  }
  void i64(std::int64_t v) { u64(static_cast<std::uint64_t>(v)); }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void matrix(const CMatrix& m) {
    i64(m.rows());
    i64(m.cols());
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      for (Eigen::Index i = 0; i < m.rows(); ++i) {
        f64(m(i, j).real());
        f64(m(i, j).imag());
      }
    }
  }
  void points(const std::vector<Vec3>& pts) {
    i64(static_cast<std::int64_t>(pts.size()));
    for (const auto& p : pts) {
      f64(p.x());
      f64(p.y());
      f64(p.z());
    }
  }
  void pinv(const TruncatedPinv& p) {
    matrix(p.V);
    matrix(p.U);
    i64(p.inv_sigma.size());
    for (Eigen::Index i = 0; i < p.inv_sigma.size(); ++i) f64(p.inv_sigma[i]);
    f64(p.truncation.epsilon);
    i64(p.truncation.retained_rank);
  }
  void raw(const char* data, std::size_t n) { out_.write(data, static_cast<std::streamsize>(n)); }
  void finish() {
    out_.flush();
    if (!out_) throw Error("operator cache write failed");
  }

 private:
  std::ofstream out_;
};

class Reader {
 public:
  explicit Reader(std::ifstream& in) : in_(in) {}
  std::uint64_t u64() {
    unsigned char b[8];
    in_.read(reinterpret_cast<char*>(b), 8);
    if (!in_) throw Error("operator cache truncated");
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return v;
  }
  std::int64_t i64() { return static_cast<std::int64_t>(u64()); }
  int i32() { return static_cast<int>(i64()); }
  double f64() { return std::bit_cast<double>(u64()); }
  std::int64_t count(std::int64_t limit = std::int64_t{1} << 32) {
    const auto n = i64();
    if (n < 0 || n > limit) throw Error("operator cache corrupt");
    return n;
  }
  CMatrix matrix() {
    const auto r = count(1 << 24), c = count(1 << 24);
    CMatrix m(r, c);
    for (Eigen::Index j = 0; j < c; ++j) {
      for (Eigen::Index i = 0; i < r; ++i) {
        const double re = f64();
        m(i, j) = Complex(re, f64());
      }
    }
    return m;
  }
  std::vector<Vec3> points() {
    std::vector<Vec3> pts(count(1 << 24));
    for (auto& p : pts) {
      const double x = f64(), y = f64();
      p = Vec3(x, y, f64());
    }
    return pts;
  }
  TruncatedPinv pinv() {
    TruncatedPinv p;
    p.V = matrix();
    p.U = matrix();
    p.inv_sigma.resize(count(1 << 24));
    for (Eigen::Index i = 0; i < p.inv_sigma.size(); ++i) p.inv_sigma[i] = f64();
    p.truncation.epsilon = f64();
    p.truncation.retained_rank = i32();
    return p;
  }

 private:
  std::ifstream& in_;
};

void write_key(Writer& w, const CacheKey& k) {
  w.u64(k.mesh_hash);
  w.f64(k.k);
  w.f64(k.epsilon);
  w.i64(k.p0);
  w.i64(k.max_leaf);
}

CacheKey read_key(Reader& r) {
  CacheKey k;
  k.mesh_hash = r.u64();
  k.k = r.f64();
  k.epsilon = r.f64();
  k.p0 = r.i32();
  k.max_leaf = r.i32();
  return k;
}

}  // namespace

void save_operator_cache(const std::filesystem::path& path, const CacheKey& key,
                         const TranslationOperators& ops) {
  Writer w(path);
  w.raw(kMagic.data(), kMagic.size());
  w.u64(kCacheVersion);
  write_key(w, key);
  const auto& pr = ops.params;
  w.f64(pr.epsilon);
  w.i64(pr.p0);
  w.f64(pr.lf_equiv_scale);
  w.f64(pr.lf_check_scale);
  w.f64(pr.hf_cube_scale);
  w.i64(pr.hf_extra_points);
  w.i64(pr.hf_check_extra_points);
  w.f64(pr.max_half_angle);
  w.i64(static_cast<std::int64_t>(ops.levels.size()));
  for (const auto& l : ops.levels) {
    w.i64(l.level);
    w.i64(l.high() ? 1 : 0);
    w.f64(l.width);
    w.i64(l.p);
    w.i64(l.frustum_p);
    w.f64(l.frustum.rho_min);
    w.f64(l.frustum.rho_max);
    w.f64(l.frustum.half_angle);
    w.i64(l.high() ? l.directions.j() : -1);
    w.points(l.out_equiv);
    w.points(l.out_check);
    w.points(l.in_equiv);
    w.points(l.in_check);
    w.pinv(l.up);
    w.pinv(l.dn);
    w.matrix(l.s2m_factor);
    w.matrix(l.l2t_factor);
    // Unordered map iteration order is not stable; sort keys for a
    // reproducible file.
    std::vector<const std::pair<const OffsetKey, M2LOperator>*> entries;
    for (const auto& e : l.m2l) entries.push_back(&e);
    std::sort(entries.begin(), entries.end(), [](auto* a, auto* b) {
      return std::tie(a->first.x, a->first.y, a->first.z) <
             std::tie(b->first.x, b->first.y, b->first.z);
    });
    w.i64(static_cast<std::int64_t>(entries.size()));
    for (const auto* e : entries) {
      w.i64(e->first.x);
      w.i64(e->first.y);
      w.i64(e->first.z);
      w.i64(e->second.factored ? 1 : 0);
      w.i64(e->second.second_rank);
      w.matrix(e->second.dense);
      w.matrix(e->second.left);
      w.matrix(e->second.right);
    }
    for (const auto* table : {&l.m2m, &l.l2l}) {
      w.i64(static_cast<std::int64_t>(table->size()));
      for (const auto& [k, m] : *table) {
        w.i64(k);
        w.matrix(m);
      }
    }
  }
  w.finish();
}

std::optional<TranslationOperators> load_operator_cache(const std::filesystem::path& path,
                                                        const CacheKey& key) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::array<char, 8> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kMagic) throw Error("not an operator cache: " + path.string());
  Reader r(in);
  if (r.u64() != kCacheVersion) return std::nullopt;
  if (!(read_key(r) == key)) return std::nullopt;

  TranslationOperators ops;
  auto& pr = ops.params;
  pr.epsilon = r.f64();
  pr.p0 = r.i32();
  pr.lf_equiv_scale = r.f64();
  pr.lf_check_scale = r.f64();
  pr.hf_cube_scale = r.f64();
  pr.hf_extra_points = r.i32();
  pr.hf_check_extra_points = r.i32();
  pr.max_half_angle = r.f64();
  const auto nlevels = r.count(64);
  for (std::int64_t n = 0; n < nlevels; ++n) {
    LevelOperators l;
    l.level = r.i32();
    l.regime = r.i32() ? Regime::High : Regime::Low;
    l.width = r.f64();
    l.p = r.i32();
    l.frustum_p = r.i32();
    l.frustum.rho_min = r.f64();
    l.frustum.rho_max = r.f64();
    l.frustum.half_angle = r.f64();
    const int j = r.i32();
    if (l.high()) {
      l.directions = DirectionSet(j);
      for (const auto& d : l.directions.directions()) l.rotations.push_back(rotation_for(d));
    }
    l.out_equiv = r.points();
    l.out_check = r.points();
    l.in_equiv = r.points();
    l.in_check = r.points();
    l.up = r.pinv();
    l.dn = r.pinv();
    l.s2m_factor = r.matrix();
    l.l2t_factor = r.matrix();
    const auto nm2l = r.count();
    for (std::int64_t e = 0; e < nm2l; ++e) {
      OffsetKey k;
      k.x = r.i64();
      k.y = r.i64();
      k.z = r.i64();
      M2LOperator op;
      op.factored = r.i64() != 0;
      op.second_rank = r.i32();
      op.dense = r.matrix();
      op.left = r.matrix();
      op.right = r.matrix();
      l.m2l.emplace(k, std::move(op));
    }
    for (auto* table : {&l.m2m, &l.l2l}) {
      const auto nt = r.count();
      for (std::int64_t e = 0; e < nt; ++e) {
        const int k = r.i32();
        table->emplace(k, r.matrix());
      }
    }
    ops.levels.push_back(std::move(l));
  }
  return ops;
}

}  // namespace fdbem
