#include "fdbem/kernel.hpp"

namespace fdbem {

std::string_view to_string(KernelKind kind) {
  switch (kind) {
    case KernelKind::Single: return "SINGLE";
    case KernelKind::DlpY: return "DLP_Y";
    case KernelKind::DlpX: return "DLP_X";
    case KernelKind::Hyper: return "HYPER";
    case KernelKind::TargetCombined: return "TARGET_COMBINED";
    case KernelKind::NearLhs: return "NEAR_LHS";
    case KernelKind::NearRhs: return "NEAR_RHS";
  }
  return "?";
}

}  // namespace fdbem
