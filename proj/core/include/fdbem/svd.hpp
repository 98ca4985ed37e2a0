#pragma once

#include "fdbem/types.hpp"

namespace fdbem {

struct SvdTruncation {
  double epsilon = 0.0;
  int retained_rank = 0;
};

// A^+ ~= V diag(inv_sigma) U^H after dropping every sigma_i < epsilon * sigma_0.
struct TruncatedPinv {
  CMatrix V;                  // n x r
  Eigen::VectorXd inv_sigma;  // r
  CMatrix U;                  // m x r
  SvdTruncation truncation;

  int rank() const { return truncation.retained_rank; }
  CMatrix apply_matrix() const;  // V diag(inv_sigma) U^H
};

// Deterministic for fixed input. Throws on an all-zero matrix.
TruncatedPinv truncated_pinv(const CMatrix& a, double epsilon);

// Rank-r factorization A ~= left * right with sigma_i < epsilon * sigma_0 dropped;
// left = U_r Sigma_r, right = V_r^H.
struct LowRank {
  CMatrix left, right;
  int rank() const { return static_cast<int>(left.cols()); }
};
LowRank truncated_factor(const CMatrix& a, double epsilon);

// Largest singular value estimated by power iteration on A^H A.
double spectral_norm_estimate(const CMatrix& a, int iterations = 50, unsigned seed = 7);

}  // namespace fdbem
