#pragma once

#include <span>

#include "fdbem/fda_engine.hpp"

namespace fdbem {

inline constexpr std::size_t kOracleMaxElements = 8192;

// Full collocation matrix of one kernel kind over a BIE geometry, through the
// same entry path as the engine's near blocks (collocation_entries).
CMatrix dense_assemble(KernelKind kind, const ElementGeometry& g, const WaveContext& ctx,
                       const NearFieldPolicy& policy = {});
CMatrix dense_assemble(OperatorKind kind, const ElementGeometry& g, const WaveContext& ctx,
                       const NearFieldPolicy& policy = {});

// Conventional BIE matrix (1/2) I + D with D the double layer (DlpY) operator.
CMatrix dense_cbie(const ElementGeometry& g, const WaveContext& ctx,
                   const NearFieldPolicy& policy = {});

// Column block of potentials A Q for each operator kind, evaluated row by row
// without storing A. Result[i] corresponds to kinds[i].
std::vector<CMatrix> direct_sum(std::span<const OperatorKind> kinds, const ElementGeometry& g,
                                const WaveContext& ctx, const CMatrix& q,
                                const NearFieldPolicy& policy = {});
CVector direct_sum(OperatorKind kind, const ElementGeometry& g, const WaveContext& ctx,
                   const CVector& q, const NearFieldPolicy& policy = {});

// 2-norm condition number via a full SVD.
double condition_number(const CMatrix& a);

}  // namespace fdbem
