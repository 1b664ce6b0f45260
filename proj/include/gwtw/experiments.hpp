#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "gwtw/config.hpp"
#include "gwtw/rng.hpp"
#include "gwtw/trial_outcome.hpp"

namespace gwtw {

enum class SweepAxis { tau, sigma, alpha, nu_over_ns, f };

std::string_view to_string(SweepAxis axis) noexcept;
std::optional<SweepAxis> parse_axis(std::string_view name) noexcept;

struct RunOptions {
  std::size_t jobs = 1;
  bool keep_outcomes = true;
  bool stop_on_convergence = true;  // web only
};

/// Aggregate over the trials of one configuration. Convergence-time
/// statistics are taken over converged-optimal trials only.
struct SweepPoint {
  double axis_value = 0.0;
  SimConfig config;
  std::size_t trials = 0;
  std::size_t converged_optimal = 0;
  std::size_t converged_nonoptimal = 0;
  std::size_t timeout = 0;
  double failure_rate = 0.0;  // nonoptimal / converged; 0 when nothing converged
  double timeout_rate = 0.0;
  std::optional<double> mean_convergence_time;
  std::optional<double> median_convergence_time;
  double convergence_time_stderr = 0.0;
  std::vector<TrialOutcome> outcomes;  // by trial index, if kept
};

struct SweepResult {
  SweepAxis axis = SweepAxis::tau;
  std::vector<SweepPoint> points;
};

/// Runs trials with stream ids 0..trials-1 of config.seed. Results do not
/// depend on options.jobs.
SweepPoint run_trials(const SimConfig& config, std::size_t trials, Model model,
                      const RunOptions& options = {});

/// Folds finished outcomes into a point's counters and statistics.
void aggregate(SweepPoint& point, std::span<const TrialOutcome> outcomes);

/// base with one parameter replaced. For nu_over_ns the load of `base` is
/// held fixed: n_s = round(n_u / value), kappa = round(n_u / (load * n_s)).
/// Throws ConfigError("sweep.values", ...) for non-integral sigma/tau or a
/// kappa that drifts more than 10% from its exact value.
SimConfig apply_axis(const SimConfig& base, SweepAxis axis, double value);

SweepResult sweep(const SimConfig& base, SweepAxis axis, std::span<const double> values,
                  std::size_t trials, Model model, const RunOptions& options = {});

/// Minimum and 1st/5th/50th nearest-rank percentiles of per-user rates.
struct SpreadOrderStats {
  double min = 0.0;
  double p1 = 0.0;
  double p5 = 0.0;
  double p50 = 0.0;
};

SpreadOrderStats spread_order_stats(std::span<const double> user_rates);

/// Runs the web model to `measure_at` without stopping at convergence and
/// reports order statistics of each user's best-candidate window hit rate.
SpreadOrderStats mixed_spread_experiment(const SimConfig& config, double measure_at,
                                         std::uint64_t stream_id);

struct MaxLoadStats {
  std::vector<std::size_t> max_loads;  // per trial
  double bound = 0.0;                  // 3 * sigma * n_u / n_s
  std::size_t within_bound = 0;
  double mean = 0.0;
  std::size_t min = 0;
  std::size_t max = 0;

  double fraction_within_bound() const noexcept {
    return max_loads.empty() ? 0.0
                             : static_cast<double>(within_bound) /
                                   static_cast<double>(max_loads.size());
  }
};

/// Each of n_u users picks sigma distinct uniform servers; records the
/// largest per-server user count in each trial.
MaxLoadStats balls_in_bins_max_load(std::size_t n_u, std::size_t n_s, std::size_t sigma,
                                    std::size_t trials, RngStream& rng);

}  // namespace gwtw
