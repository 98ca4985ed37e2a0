#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <tuple>

#include "fdbem/oracles.hpp"
#include "fdbem/sphere_series.hpp"

namespace fdbem::cli {
namespace {

// Largest benchmark refinement that fits the default memory budget (32768 elements).
constexpr int kMaxBenchSubdivisions = 6;

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

struct Input {
  TriMesh mesh;
  bool sphere = false;  // generated, so analytic references apply
  std::string label;
};

Input load_input(const RunConfig& cfg) {
  Input in;
  if (cfg.mesh.empty()) {
    in.mesh = generate_sphere_mesh(cfg.sphere_subdivisions, cfg.sphere_radius);
    in.sphere = true;
    in.label = fmt("generated sphere n=%d radius=%.17g", cfg.sphere_subdivisions,
                   cfg.sphere_radius);
    return in;
  }
  if (!std::filesystem::exists(cfg.mesh)) {
    throw ConfigError("mesh not found: " + cfg.mesh.string());
  }
  std::vector<std::string> warnings;
  try {
    in.mesh = load_mesh(cfg.mesh, mesh_format_from_path(cfg.mesh), &warnings);
  } catch (const Error& e) {
    throw ConfigError("cannot read mesh " + cfg.mesh.string() + ": " + e.what());
  }
  for (const auto& w : warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
  in.label = cfg.mesh.string();
  return in;
}

struct Outcome {
  Input input;
  ElementGeometry geometry;  // outward normals, for output
  Solution sol;
  std::optional<CVector> reference;
  double error = std::nan("");
};

Outcome run(const RunConfig& cfg) {
  Outcome o;
  o.input = load_input(cfg);
  const TriMesh& mesh = o.input.mesh;
  o.geometry = compute_element_geometry(mesh);
  const WaveContext ctx(cfg.k);
  const SolverConfig scfg = cfg.solver_config(mesh);
  const double a = cfg.sphere_radius;
  const std::size_t n = mesh.num_elements();

  switch (cfg.problem) {
    case Problem::Pulsating:
      o.sol = solve_exterior(mesh, ctx, CVector::Ones(n), IncidentField::none(), scfg);
      if (o.input.sphere) o.reference = CVector::Constant(n, a * pulsating_sphere_exact(cfg.k * a));
      break;
    case Problem::PlaneWave: {
      const Vec3 d = cfg.direction.normalized();
      o.sol = solve_sound_hard(mesh, ctx, IncidentField::plane_wave(d), scfg);
      if (o.input.sphere) {
        const auto exact = sphere_scattering_exact(cfg.k, a, o.geometry.centroid, d);
        o.reference = Eigen::Map<const CVector>(exact.data(), exact.size());
      }
      break;
    }
    case Problem::PointSource:
      o.sol = solve_sound_hard(mesh, ctx, IncidentField::point_source(cfg.source), scfg);
      break;
  }
  if (o.reference) o.error = l2_error(o.sol.u, *o.reference);
  return o;
}

void write_csv(const Outcome& o, const std::filesystem::path& path) {
  std::FILE* f = std::fopen(path.string().c_str(), "w");
  if (!f) throw ConfigError("cannot write " + path.string());
  std::fprintf(f, "id,cx,cy,cz,re_u,im_u,abs_u\n");
  for (std::size_t i = 0; i < o.geometry.size(); ++i) {
    const Vec3& c = o.geometry.centroid[i];
    const Complex u = o.sol.u[i];
    std::fprintf(f, "%zu,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", i, c.x(), c.y(), c.z(), u.real(),
                 u.imag(), std::abs(u));
  }
  std::fclose(f);
}

std::string summary_text(const RunConfig& cfg, const Outcome& o) {
  const Solution& s = o.sol;
  std::string t;
  t += "problem: " + to_string(cfg.problem) + "\n";
  t += "mesh: " + o.input.label + "\n";
  t += fmt("N: %zu\n", s.u.size());
  t += fmt("k: %.17g\n", cfg.k);
  t += fmt("epsilon: %.17g\n", cfg.epsilon);
  t += fmt("p0: %d\n", cfg.p0);
  t += fmt("max_leaf: %d\n", cfg.max_leaf);
  t += fmt("T_t(s): %.6f\n", s.timings.total);
  t += fmt("T_setup(s): %.6f\n", s.timings.setup);
  t += fmt("T_it(s): %.6f\n", s.timings.per_iteration);
  t += fmt("N_it: %d\n", s.iterations);
  t += fmt("residual: %.6e\n", s.residual);
  t += std::string("converged: ") + (s.converged ? "yes" : "no") + "\n";
  t += fmt("M(MB, estimate): %.3f\n", s.memory_bytes / 1048576.0);
  t += o.reference ? fmt("L2-error: %.17g\n", o.error) : std::string("L2-error: n/a\n");
  t += fmt("levels: %zu (high %zu)\n", s.stats.levels, s.stats.high_levels);
  t += fmt("cubes: %zu (leaves %zu)\n", s.stats.cubes, s.stats.leaves);
  t += fmt("far pairs: %zu, near pairs: %zu\n", s.stats.far_pairs, s.stats.near_pairs);
  t += fmt("M2L operators: %zu (high %zu, factored %zu)\n", s.stats.m2l_operators,
           s.stats.m2l_high, s.stats.m2l_high_factored);
  t += std::string("operator cache: ") +
       (cfg.cache.empty() ? "off" : (s.stats.cache_hit ? "hit" : "miss")) + "\n";
  return t;
}

void write_text(const std::string& text, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << text;
}

void warn_threads(const RunConfig& cfg) {
  if (cfg.threads > 1) {
    std::fprintf(stderr, "warning: threads=%d requested; the engine runs single-threaded\n",
                 cfg.threads);
  }
}

int finish(const RunConfig& cfg, const Outcome& o) {
  write_csv(o, cfg.csv);
  const std::string text = summary_text(cfg, o);
  write_text(text, cfg.summary);
  std::fputs(text.c_str(), stdout);
  if (!o.sol.converged) {
    std::fprintf(stderr, "GMRES did not converge in %d iterations (residual %.3e)\n",
                 o.sol.iterations, o.sol.residual);
    return kNotConverged;
  }
  return kOk;
}

// Verification report: one line per check.
class Report {
 public:
  explicit Report(std::string level) : level_(std::move(level)) {}

  void check(bool ok, const std::string& name, const std::string& detail) {
    std::printf("%s  [%s] %s: %s\n", ok ? "PASS" : "FAIL", level_.c_str(), name.c_str(),
                detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures_;
  }
  void at_most(const std::string& name, double measured, double bound) {
    check(measured <= bound, name, fmt("%.3e <= %.1e", measured, bound));
  }
  int failures() const { return failures_; }

 private:
  std::string level_;
  int failures_ = 0;
};

int verify_kernels() {
  Report r("kernels");
  const Vec3 z(0, 0, 1);
  const WaveContext stat(0.0);
  const Complex g = eval_kernel(KernelKind::Single, Vec3::Zero(), Vec3(1, 0, 0), z, z, stat);
  r.at_most("static SINGLE r=1 vs 1/(4pi)", std::abs(g - 1.0 / (4.0 * kPi)), 1e-15);
  const Complex flip =
      eval_kernel(KernelKind::Single, Vec3::Zero(), Vec3(0, 0.5, 0), z, z, WaveContext(2.0 * kPi));
  r.at_most("SINGLE half-wavelength vs -1/(2pi)", std::abs(flip + 1.0 / (2.0 * kPi)), 1e-15);
  const Complex d = eval_kernel(KernelKind::DlpY, Vec3::Zero(), z, z, z, stat);
  r.at_most("static axial DLP_Y vs -1/(4pi)", std::abs(d + 1.0 / (4.0 * kPi)), 1e-15);
  const Complex h = eval_kernel(KernelKind::Hyper, Vec3::Zero(), z, z, z, stat);
  r.at_most("static axial HYPER vs -1/(2pi)", std::abs(h + 1.0 / (2.0 * kPi)), 1e-15);

  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::normal_distribution<double> nd;
  auto unit = [&] { return Vec3(nd(rng), nd(rng), nd(rng)).normalized(); };
  const WaveContext ctx(1.3);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const Vec3 x(u(rng), u(rng), u(rng)), y(u(rng), u(rng), u(rng));
    const Vec3 nx = unit(), ny = unit();
    const double dist = (x - y).norm();
    if (dist < 0.2) continue;
    const double step = 1e-5 * dist;
    const Complex fd = (eval_kernel(KernelKind::DlpY, x + step * nx, y, nx, ny, ctx) -
                        eval_kernel(KernelKind::DlpY, x - step * nx, y, nx, ny, ctx)) /
                       (2.0 * step);
    const Complex hy = eval_kernel(KernelKind::Hyper, x, y, nx, ny, ctx);
    worst = std::max(worst, std::abs(fd - hy) / std::abs(hy));
  }
  r.at_most("HYPER vs finite difference of DLP_Y (k=1.3, random)", worst, 1e-6);

  const Triangle tri{Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0)};
  const Vec3 far(0.3, 0.3, 25.0);
  const Complex far_val = element_integral(tri, z, far, z, KernelKind::Single, stat);
  const double point_mass = tri.area() / (4.0 * kPi * (far - tri.centroid()).norm());
  r.at_most("far-field SINGLE vs point mass A/(4 pi d)",
            std::abs(far_val.real() - point_mass) / point_mass, 1e-2);

  const SelfTerms st = self_terms(tri, WaveContext(kPi));
  r.at_most("DLP_Y self part on a flat panel", std::abs(st.dlp_y), 0.0);

  NearFieldPolicy shallow, deep;
  shallow.max_depth = 6;
  deep.max_depth = 8;
  const Vec3 near_x = tri.centroid() + 0.1 * tri.diameter() * z;
  const Complex v6 = element_integral(tri, z, near_x, z, KernelKind::NearLhs, WaveContext(kPi),
                                      default_rule(), shallow);
  const Complex v8 = element_integral(tri, z, near_x, z, KernelKind::NearLhs, WaveContext(kPi),
                                      default_rule(), deep);
  r.at_most("NEAR_LHS near-singular depth 6 vs 8", std::abs(v6 - v8), 1e-6);
  return r.failures();
}

int verify_operators(double eps) {
  Report r("operators");
  r.check(points_per_side(1e-3, 1) == 4, "points_per_side(1e-3, p0=1)",
          fmt("%d == 4", points_per_side(1e-3, 1)));

  const TriMesh mesh = generate_sphere_mesh(4, 1.0);
  const ElementGeometry g = bie_geometry(mesh);
  const WaveContext ctx(4.0 * kPi);
  const FdaEngine engine(g, ctx, default_solver_config(eps).engine);
  const EngineStats s = engine.stats();
  r.check(s.high_levels > 0, "HIGH levels at N=2048 k=4pi", fmt("%zu > 0", s.high_levels));

  const auto& tree = engine.tree();
  const auto& lists = engine.lists();
  std::set<std::tuple<int, std::int64_t, std::int64_t, std::int64_t>> seen;
  double worst = 0.0;
  int sampled = 0;
  for (int l = 0; l <= tree.depth() && sampled < 10; ++l) {
    if (!tree.is_high(l)) continue;
    const auto& lvl = engine.operators().levels[l];
    for (int t : tree.levels[l]) {
      for (const FarEntry& e : lists.far[t]) {
        if (sampled >= 10) break;
        const Vec3& sc = tree.cubes[e.source].center;
        const Vec3& tc = tree.cubes[t].center;
        const OffsetKey key = m2l_key(lvl, sc, tc, e.direction);
        if (!seen.emplace(l, key.x, key.y, key.z).second) continue;
        const CMatrix direct = m2l_projector_direct(lvl, sc, tc, e.direction, ctx, eps);
        const CMatrix table = m2l_projector_table(lvl, key);
        worst = std::max(worst, spectral_norm_estimate(direct - table) /
                                    spectral_norm_estimate(table));
        ++sampled;
      }
    }
  }
  r.check(sampled > 0 && worst <= 5 * eps, "rotation reuse, HIGH M2L projectors",
          fmt("%d pairs, worst %.3e <= %.1e", sampled, worst, 5 * eps));

  const double frac =
      s.m2l_high ? static_cast<double>(s.m2l_high_factored) / s.m2l_high : 0.0;
  r.check(s.m2l_high > 0 && frac >= 0.5, "HIGH M2L second-stage rank r < dim/2",
          fmt("%zu of %zu, fraction %.3f >= 0.5", s.m2l_high_factored, s.m2l_high, frac));
  return r.failures();
}

int verify_matvec(double eps) {
  Report r("matvec");
  const ElementGeometry g = bie_geometry(generate_sphere_mesh(4, 1.0));
  const WaveContext ctx(2.0 * kPi);
  const OperatorKind kinds[] = {OperatorKind::Lhs, OperatorKind::Rhs};
  FdaEngine engine(g, ctx, default_solver_config(eps).engine);
  engine.precompute(kinds);
  std::mt19937 rng(7);
  std::normal_distribution<double> nd;
  CMatrix q(g.size(), 2);
  for (Eigen::Index i = 0; i < q.size(); ++i) q.data()[i] = Complex(nd(rng), nd(rng));
  const auto ref = direct_sum(kinds, g, ctx, q);
  for (int kind = 0; kind < 2; ++kind) {
    double worst = 0.0;
    for (int c = 0; c < q.cols(); ++c) {
      const CVector p = engine.apply(kinds[kind], q.col(c));
      worst = std::max(worst, (p - ref[kind].col(c)).norm() / ref[kind].col(c).norm());
    }
    r.at_most(fmt("N=2048 k=2pi %s vs direct sum", kind == 0 ? "LHS" : "RHS"), worst, 10 * eps);
  }
  return r.failures();
}

int verify_solve(double eps) {
  Report r("solve");
  const struct {
    int n;
    double k, bound;
  } rows[] = {{3, kPi, 4.5e-2}, {4, 2.0 * kPi, 2.5e-2}};
  for (const auto& row : rows) {
    const TriMesh mesh = generate_sphere_mesh(row.n, 1.0);
    const Solution s = solve_exterior(mesh, WaveContext(row.k), CVector::Ones(mesh.num_elements()),
                                      IncidentField::none(), default_solver_config(eps));
    const double e =
        l2_error(s.u, CVector::Constant(s.u.size(), pulsating_sphere_exact(row.k)));
    r.at_most(fmt("pulsating N=%zu k=%gpi L2", s.u.size(), row.k / kPi), e, row.bound);
    r.check(s.converged && s.iterations <= 8, fmt("pulsating N=%zu GMRES iterations", s.u.size()),
            fmt("%d <= 8", s.iterations));
  }
  return r.failures();
}

}  // namespace

int cmd_solve(const RunConfig& cfg) {
  warn_threads(cfg);
  return finish(cfg, run(cfg));
}

int cmd_verify(const RunConfig& cfg, const std::string& level) {
  const bool all = level == "all";
  if (!all && level != "kernels" && level != "operators" && level != "matvec" && level != "solve") {
    throw ConfigError("verify level must be kernels, operators, matvec, solve or all");
  }
  int failures = 0;
  if (all || level == "kernels") failures += verify_kernels();
  if (all || level == "operators") failures += verify_operators(cfg.epsilon);
  if (all || level == "matvec") failures += verify_matvec(cfg.epsilon);
  if (all || level == "solve") failures += verify_solve(cfg.epsilon);
  std::printf("%d failed\n", failures);
  return failures ? kVerifyFailed : kOk;
}

int cmd_benchmark(const RunConfig& cfg) {
  if (cfg.bench_n_max > kMaxBenchSubdivisions) {
    throw ConfigError(fmt("resource guard: bench_n_max %d exceeds %d", cfg.bench_n_max,
                          kMaxBenchSubdivisions));
  }
  warn_threads(cfg);
  std::vector<double> ln_n, ln_t;
  std::string table = "n,N,k,T_t,T_it,N_it,M_MB,L2\n";
  std::optional<Outcome> last;
  RunConfig row_cfg = cfg;
  bool all_converged = true;
  std::printf("%3s %8s %10s %10s %10s %5s %10s %11s\n", "n", "N", "k", "T_t(s)", "T_it(s)",
              "N_it", "M(MB)", "L2");
  for (int n = cfg.bench_n_min; n <= cfg.bench_n_max; ++n) {
    row_cfg = cfg;
    row_cfg.mesh.clear();
    row_cfg.sphere_subdivisions = n;
    row_cfg.sphere_radius = 1.0;
    row_cfg.k = kPi * std::ldexp(1.0, n - 3);
    Outcome o = run(row_cfg);
    const Solution& s = o.sol;
    all_converged = all_converged && s.converged;
    std::printf("%3d %8zu %10.4f %10.3f %10.4f %5d %10.1f %11.3e\n", n, s.u.size(), row_cfg.k,
                s.timings.total, s.timings.per_iteration, s.iterations,
                s.memory_bytes / 1048576.0, o.error);
    std::fflush(stdout);
    table += fmt("%d,%zu,%.17g,%.6f,%.6f,%d,%.3f,%.17g\n", n, s.u.size(), row_cfg.k,
                 s.timings.total, s.timings.per_iteration, s.iterations,
                 s.memory_bytes / 1048576.0, o.error);
    ln_n.push_back(std::log(static_cast<double>(s.u.size())));
    ln_t.push_back(std::log(s.timings.per_iteration));
    last = std::move(o);
  }
  if (!cfg.bench_csv.empty()) write_text(table, cfg.bench_csv);

  if (ln_n.size() == 1) return finish(row_cfg, *last);

  const double mx = std::accumulate(ln_n.begin(), ln_n.end(), 0.0) / ln_n.size();
  const double my = std::accumulate(ln_t.begin(), ln_t.end(), 0.0) / ln_t.size();
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < ln_n.size(); ++i) {
    sxy += (ln_n[i] - mx) * (ln_t[i] - my);
    sxx += (ln_n[i] - mx) * (ln_n[i] - mx);
  }
  std::printf("T_it ~ N^%.3f (least-squares fit of log T_it vs log N)\n", sxy / sxx);
  return all_converged ? kOk : kNotConverged;
}

}  // namespace fdbem::cli
