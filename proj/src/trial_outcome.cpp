#include "gwtw/trial_outcome.hpp"

namespace gwtw {

std::string_view to_string(TrialStatus status) noexcept {
  switch (status) {
    case TrialStatus::converged_optimal: return "converged-optimal";
    case TrialStatus::converged_nonoptimal: return "converged-nonoptimal";
    case TrialStatus::timeout: return "timeout";
  }
  return "?";
}

}  // namespace gwtw
