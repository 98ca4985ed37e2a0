#include "fdbem/bem_solver.hpp"

#include <chrono>

namespace fdbem {
namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

IncidentField IncidentField::plane_wave(const Vec3& direction) {
  const double n = direction.norm();
  if (!(n > 0.0)) throw Error("plane-wave direction must be nonzero");
  return {Type::PlaneWave, direction / n};
}

IncidentField IncidentField::point_source(const Vec3& location) {
  return {Type::PointSource, location};
}

IncidentTrace incident_trace(const IncidentField& field, const WaveContext& ctx, const Vec3& x,
                             const Vec3& n_x) {
  switch (field.type) {
    case IncidentField::Type::None: return {};
    case IncidentField::Type::PlaneWave: {
      const double phase = ctx.k() * field.vector.dot(x);
      const Complex u(std::cos(phase), std::sin(phase));
      return {u, Complex(0.0, ctx.k() * field.vector.dot(n_x)) * u};
    }
    case IncidentField::Type::PointSource:
      return {eval_kernel(KernelKind::Single, x, field.vector, n_x, n_x, ctx),
              eval_kernel(KernelKind::DlpX, x, field.vector, n_x, n_x, ctx)};
  }
  return {};
}

CVector assemble_rhs(const CVector& v, const IncidentField& field, const FdaEngine& engine,
                     const ElementGeometry& g) {
  if (static_cast<std::size_t>(v.size()) != g.size()) throw Error("assemble_rhs: length mismatch");
  const WaveContext& ctx = engine.context();
  CVector b = v.squaredNorm() > 0.0 ? engine.apply(OperatorKind::Rhs, v)
                                    : CVector::Zero(v.size()).eval();
  if (field.type != IncidentField::Type::None) {
    const Complex alpha = ctx.alpha();
    for (std::size_t i = 0; i < g.size(); ++i) {
      const auto t = incident_trace(field, ctx, g.centroid[i], g.normal[i]);
      b[i] += t.u + alpha * t.dudn;
    }
  }
  return b;
}

SolverConfig default_solver_config(double epsilon) {
  SolverConfig cfg;
  cfg.engine.translation.epsilon = epsilon;
  cfg.gmres.tolerance = epsilon;
  return cfg;
}

Solution solve_exterior(const TriMesh& mesh, const WaveContext& ctx, const CVector& v,
                        const IncidentField& field, const SolverConfig& cfg) {
  if (!is_closed(mesh)) throw Error("exterior solve requires a closed mesh");
  if (static_cast<std::size_t>(v.size()) != mesh.num_elements()) {
    throw Error("Neumann data length does not match the mesh");
  }
  const auto t0 = std::chrono::steady_clock::now();
  const ElementGeometry g = bie_geometry(mesh);
  FdaEngine engine(g, ctx, cfg.engine);
  const bool need_rhs = v.squaredNorm() > 0.0;
  std::vector<OperatorKind> kinds{OperatorKind::Lhs};
  if (need_rhs) kinds.push_back(OperatorKind::Rhs);
  engine.precompute(kinds);
  const CVector b = assemble_rhs(v, field, engine, g);

  Solution sol;
  sol.timings.setup = seconds_since(t0);
  GmresConfig gcfg = cfg.gmres;
  if (!(gcfg.tolerance > 0.0)) gcfg.tolerance = cfg.engine.translation.epsilon;
  const auto t1 = std::chrono::steady_clock::now();
  auto res = gmres_solve([&](const CVector& x) { return engine.apply(OperatorKind::Lhs, x); }, b,
                         gcfg);
  sol.timings.solve = seconds_since(t1);
  sol.timings.total = seconds_since(t0);
  sol.timings.per_iteration = res.iterations > 0 ? sol.timings.solve / res.iterations : 0.0;
  sol.u = std::move(res.x);
  sol.iterations = res.iterations;
  sol.residual = res.residual;
  sol.converged = res.converged;
  sol.stats = engine.stats();
  sol.memory_bytes = engine.memory_bytes() +
                     static_cast<std::size_t>(res.iterations + 1) * g.size() * sizeof(Complex);
  return sol;
}

Solution solve_sound_hard(const TriMesh& mesh, const WaveContext& ctx, const IncidentField& field,
                          const SolverConfig& cfg) {
  return solve_exterior(mesh, ctx, CVector::Zero(mesh.num_elements()), field, cfg);
}

double l2_error(const CVector& u, const CVector& ref) {
  if (u.size() != ref.size()) throw Error("l2_error: length mismatch");
  const double r = ref.norm();
  if (r == 0.0) throw Error("l2_error: zero reference");
  return (u - ref).norm() / r;
}

}  // namespace fdbem
