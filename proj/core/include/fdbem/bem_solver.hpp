#pragma once

#include <memory>

#include "fdbem/fda_engine.hpp"
#include "fdbem/gmres.hpp"
#include "fdbem/mesh.hpp"

namespace fdbem {

struct IncidentField {
  enum class Type { None, PlaneWave, PointSource };
  Type type = Type::None;
  Vec3 vector = Vec3::Zero();  // plane-wave direction or source location

  static IncidentField none() { return {}; }
  static IncidentField plane_wave(const Vec3& direction);
  static IncidentField point_source(const Vec3& location);
};

struct IncidentTrace {
  Complex u, dudn;
};

// Incident value and normal derivative at x for normal n_x.
IncidentTrace incident_trace(const IncidentField& field, const WaveContext& ctx, const Vec3& x,
                             const Vec3& n_x);

// b = apply(RHS, v) + u_inc + alpha dudn_inc at each centroid.
CVector assemble_rhs(const CVector& v, const IncidentField& field, const FdaEngine& engine,
                     const ElementGeometry& g);

struct SolverConfig {
  EngineOptions engine;
  GmresConfig gmres;  // tolerance defaults to engine.translation.epsilon when <= 0
};

struct Timings {
  double setup = 0.0;          // tree, operators, near blocks (s)
  double solve = 0.0;          // GMRES (s)
  double total = 0.0;          // T_t
  double per_iteration = 0.0;  // T_it
};

struct Solution {
  CVector u;
  int iterations = 0;
  double residual = 0.0;
  bool converged = false;
  Timings timings;
  std::size_t memory_bytes = 0;  // accounted estimate
  EngineStats stats;
};

SolverConfig default_solver_config(double epsilon = 1e-3);

// Solves (LHS) u = b for the surface potential. v is dudn on each element
// with n pointing into the obstacle. Requires a closed mesh.
Solution solve_exterior(const TriMesh& mesh, const WaveContext& ctx, const CVector& v,
                        const IncidentField& field, const SolverConfig& cfg);

// Sound-hard scattering of `field`, posed for the total field (v = 0).
Solution solve_sound_hard(const TriMesh& mesh, const WaveContext& ctx, const IncidentField& field,
                          const SolverConfig& cfg);

// ||u - ref|| / ||ref||.
double l2_error(const CVector& u, const CVector& ref);

}  // namespace fdbem
