#include "fdbem/oracles.hpp"

#include <Eigen/SVD>

namespace fdbem {
namespace {

void guard(const ElementGeometry& g) {
  if (g.size() > kOracleMaxElements) throw Error("oracle limited to 8192 elements");
}

}  // namespace

CMatrix dense_assemble(KernelKind kind, const ElementGeometry& g, const WaveContext& ctx,
                       const NearFieldPolicy& policy) {
  guard(g);
  const std::size_t n = g.size();
  CMatrix a(n, n);
  Complex v;
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      collocation_entries(g, i, j, std::span<const KernelKind>(&kind, 1), ctx,
                          std::span<Complex>(&v, 1), policy);
      a(i, j) = v;
    }
  }
  return a;
}

CMatrix dense_assemble(OperatorKind kind, const ElementGeometry& g, const WaveContext& ctx,
                       const NearFieldPolicy& policy) {
  return dense_assemble(near_kernel(kind), g, ctx, policy);
}

CMatrix dense_cbie(const ElementGeometry& g, const WaveContext& ctx,
                   const NearFieldPolicy& policy) {
  CMatrix a = dense_assemble(KernelKind::DlpY, g, ctx, policy);
  a.diagonal().array() += 0.5;
  return a;
}

std::vector<CMatrix> direct_sum(std::span<const OperatorKind> kinds, const ElementGeometry& g,
                                const WaveContext& ctx, const CMatrix& q,
                                const NearFieldPolicy& policy) {
  guard(g);
  const std::size_t n = g.size();
  if (static_cast<std::size_t>(q.rows()) != n) throw Error("direct_sum: length mismatch");
  std::vector<KernelKind> nk;
  for (auto k : kinds) nk.push_back(near_kernel(k));
  std::vector<CMatrix> out(kinds.size(), CMatrix::Zero(n, q.cols()));
  std::vector<Complex> buf(kinds.size());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      collocation_entries(g, i, j, nk, ctx, buf, policy);
      for (std::size_t m = 0; m < kinds.size(); ++m) out[m].row(i) += buf[m] * q.row(j);
    }
  }
  return out;
}

CVector direct_sum(OperatorKind kind, const ElementGeometry& g, const WaveContext& ctx,
                   const CVector& q, const NearFieldPolicy& policy) {
  return direct_sum(std::span<const OperatorKind>(&kind, 1), g, ctx, CMatrix(q), policy)
      .front()
      .col(0);
}

double condition_number(const CMatrix& a) {
  Eigen::BDCSVD<CMatrix> svd(a);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s[s.size() - 1] == 0.0) return std::numeric_limits<double>::infinity();
  return s[0] / s[s.size() - 1];
}

}  // namespace fdbem
