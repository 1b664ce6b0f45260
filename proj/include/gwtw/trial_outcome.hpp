#pragma once

#include <optional>
#include <string_view>
#include <vector>

namespace gwtw {

enum class TrialStatus { converged_optimal, converged_nonoptimal, timeout };

std::string_view to_string(TrialStatus status) noexcept;

struct TraceSample {
  double time = 0.0;
  double undecided_fraction = 1.0;
  double minmax_metric = 0.0;  // minmax hit rate (web) or bitrate (video)
};

/// Result of one trial. convergence_time is set iff status != timeout; it
/// is simulated time for the web model and a step count for video.
struct TrialOutcome {
  TrialStatus status = TrialStatus::timeout;
  std::optional<double> convergence_time;
  std::vector<double> final_user_rates;  // best-candidate rate per user
  std::vector<TraceSample> trace;
};

}  // namespace gwtw
