#include "fdbem/svd.hpp"

#include <random>

#include <Eigen/SVD>

namespace fdbem {
namespace {

Eigen::BDCSVD<CMatrix> full_svd(const CMatrix& a) {
  if (a.size() == 0 || a.cwiseAbs().maxCoeff() == 0.0) {
    throw Error("SVD of an all-zero matrix");
  }
  Eigen::BDCSVD<CMatrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.info() != Eigen::Success) throw Error("SVD failed");
  return svd;
}

int retained(const Eigen::VectorXd& s, double epsilon) {
  int r = 0;
  while (r < s.size() && s[r] >= epsilon * s[0]) ++r;
  return r;
}

}  // namespace

CMatrix TruncatedPinv::apply_matrix() const { return V * inv_sigma.asDiagonal() * U.adjoint(); }

TruncatedPinv truncated_pinv(const CMatrix& a, double epsilon) {
  const auto svd = full_svd(a);
  const Eigen::VectorXd& s = svd.singularValues();
  const int r = retained(s, epsilon);
  TruncatedPinv out;
  out.V = svd.matrixV().leftCols(r);
  out.U = svd.matrixU().leftCols(r);
  out.inv_sigma = s.head(r).cwiseInverse();
  out.truncation = {epsilon, r};
  return out;
}

LowRank truncated_factor(const CMatrix& a, double epsilon) {
  const auto svd = full_svd(a);
  const Eigen::VectorXd& s = svd.singularValues();
  const int r = retained(s, epsilon);
  LowRank out;
  out.left = svd.matrixU().leftCols(r) * s.head(r).asDiagonal();
  out.right = svd.matrixV().leftCols(r).adjoint();
  return out;
}

double spectral_norm_estimate(const CMatrix& a, int iterations, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  CVector x(a.cols());
  for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = Complex(nd(rng), nd(rng));
  double est = 0.0;
  for (int it = 0; it < iterations; ++it) {
    const double nx = x.norm();
    if (nx == 0.0) return 0.0;
    x /= nx;
    const CVector y = a * x;
    est = y.norm();
    x = a.adjoint() * y;
  }
  return est;
}

}  // namespace fdbem
