#pragma once

#include <functional>

#include "fdbem/types.hpp"

namespace fdbem {

struct GmresConfig {
  double tolerance = 1e-3;
  int max_iterations = 500;
  int restart = 0;  // 0: no restart
};

struct GmresResult {
  CVector x;
  int iterations = 0;
  double residual = 0.0;  // ||b - A x|| / ||b|| recomputed from the returned iterate
  bool converged = false;
  std::vector<double> history;  // Arnoldi residual estimate after each iteration
};

using LinearMap = std::function<CVector(const CVector&)>;

// Unpreconditioned GMRES with modified Gram-Schmidt and Givens rotations,
// starting from x = 0. A non-converged run returns its last iterate flagged.
GmresResult gmres_solve(const LinearMap& a, const CVector& b, const GmresConfig& cfg);

}  // namespace fdbem
