#include "gwtw/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <string>
#include <thread>

#include "gwtw/distributions.hpp"
#include "gwtw/metrics.hpp"
#include "gwtw/video_engine.hpp"
#include "gwtw/web_engine.hpp"

namespace gwtw {

std::string_view to_string(SweepAxis axis) noexcept {
  switch (axis) {
    case SweepAxis::tau: return "tau";
    case SweepAxis::sigma: return "sigma";
    case SweepAxis::alpha: return "alpha";
    case SweepAxis::nu_over_ns: return "nu_over_ns";
    case SweepAxis::f: return "f";
  }
  return "?";
}

std::optional<SweepAxis> parse_axis(std::string_view name) noexcept {
  for (auto axis : {SweepAxis::tau, SweepAxis::sigma, SweepAxis::alpha,
                    SweepAxis::nu_over_ns, SweepAxis::f}) {
    if (to_string(axis) == name) return axis;
  }
  return std::nullopt;
}

namespace {

TrialOutcome run_one(const SimConfig& config, std::uint64_t stream_id, Model model,
                     const RunOptions& options) {
  if (model == Model::video) return run_video_trial(config, stream_id);
  return run_web_trial(config, stream_id, options.stop_on_convergence);
}

std::size_t integral_value(double value, const char* what) {
  const double rounded = std::round(value);
  if (rounded < 1.0 || std::abs(value - rounded) > 1e-9) {
    throw ConfigError("sweep.values", std::string(what) + " values must be positive integers");
  }
  return static_cast<std::size_t>(rounded);
}

}  // namespace

void aggregate(SweepPoint& point, std::span<const TrialOutcome> outcomes) {
  point.trials = outcomes.size();
  point.converged_optimal = point.converged_nonoptimal = point.timeout = 0;
  std::vector<double> times;
  for (const auto& o : outcomes) {
    switch (o.status) {
      case TrialStatus::converged_optimal:
        ++point.converged_optimal;
        times.push_back(*o.convergence_time);
        break;
      case TrialStatus::converged_nonoptimal: ++point.converged_nonoptimal; break;
      case TrialStatus::timeout: ++point.timeout; break;
    }
  }
  const std::size_t converged = point.converged_optimal + point.converged_nonoptimal;
  point.failure_rate = converged == 0 ? 0.0
                                      : static_cast<double>(point.converged_nonoptimal) /
                                            static_cast<double>(converged);
  point.timeout_rate = point.trials == 0 ? 0.0
                                         : static_cast<double>(point.timeout) /
                                               static_cast<double>(point.trials);
  point.mean_convergence_time.reset();
  point.median_convergence_time.reset();
  point.convergence_time_stderr = 0.0;
  if (!times.empty()) {
    const auto stats = mean_stats(times);
    point.mean_convergence_time = stats.mean;
    point.convergence_time_stderr = stats.standard_error;
    point.median_convergence_time = median(times);
  }
}

SweepPoint run_trials(const SimConfig& config, std::size_t trials, Model model,
                      const RunOptions& options) {
  if (trials == 0) throw ConfigError("trials", "must be >= 1");
  config.validate();

  std::vector<TrialOutcome> outcomes(trials);
  const std::size_t jobs = std::clamp<std::size_t>(options.jobs, 1, trials);
  if (jobs == 1) {
    for (std::size_t i = 0; i < trials; ++i) outcomes[i] = run_one(config, i, model, options);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::jthread> workers;
    workers.reserve(jobs);
    for (std::size_t w = 0; w < jobs; ++w) {
      workers.emplace_back([&] {
        for (std::size_t i = next++; i < trials; i = next++) {
          try {
            outcomes[i] = run_one(config, i, model, options);
          } catch (...) {
            const std::lock_guard lock(error_mutex);
            if (!error) error = std::current_exception();
          }
        }
      });
    }
    workers.clear();
    if (error) std::rethrow_exception(error);
  }

  SweepPoint point;
  point.config = config;
  aggregate(point, outcomes);
  if (options.keep_outcomes) point.outcomes = std::move(outcomes);
  return point;
}

SimConfig apply_axis(const SimConfig& base, SweepAxis axis, double value) {
  SimConfig config = base;
  switch (axis) {
    case SweepAxis::tau: config.tau = integral_value(value, "tau"); break;
    case SweepAxis::sigma: config.spread = SpreadPolicy::uniform(integral_value(value, "sigma")); break;
    case SweepAxis::alpha: config.alpha = value; break;
    case SweepAxis::f: config.spread = SpreadPolicy::mixed(value); break;
    case SweepAxis::nu_over_ns: {
      if (!(value > 0.0)) throw ConfigError("sweep.values", "nu_over_ns values must be > 0");
      const double target_load = load(base);
      const double n_s = std::max(1.0, std::round(static_cast<double>(base.n_u) / value));
      const double exact_kappa = static_cast<double>(base.n_u) / (target_load * n_s);
      const double kappa = std::max(1.0, std::round(exact_kappa));
      if (std::abs(kappa - exact_kappa) > 0.1 * exact_kappa) {
        throw ConfigError("sweep.values", "nu_over_ns=" + std::to_string(value) +
                                              " needs kappa=" + std::to_string(exact_kappa) +
                                              ", more than 10% from an integer");
      }
      config.n_s = static_cast<std::size_t>(n_s);
      config.kappa = static_cast<std::size_t>(kappa);
      break;
    }
  }
  config.validate();
  return config;
}

SweepResult sweep(const SimConfig& base, SweepAxis axis, std::span<const double> values,
                  std::size_t trials, Model model, const RunOptions& options) {
  if (values.empty()) throw ConfigError("sweep.values", "must not be empty");
  std::vector<SimConfig> configs;
  configs.reserve(values.size());
  for (double v : values) configs.push_back(apply_axis(base, axis, v));

  SweepResult result;
  result.axis = axis;
  for (std::size_t i = 0; i < values.size(); ++i) {
    SweepPoint point = run_trials(configs[i], trials, model, options);
    point.axis_value = values[i];
    result.points.push_back(std::move(point));
  }
  return result;
}

SpreadOrderStats spread_order_stats(std::span<const double> user_rates) {
  static constexpr double kPercentiles[] = {0.0, 1.0, 5.0, 50.0};
  const auto s = order_statistics(user_rates, kPercentiles);
  return {s[0], s[1], s[2], s[3]};
}

SpreadOrderStats mixed_spread_experiment(const SimConfig& config, double measure_at,
                                         std::uint64_t stream_id) {
  SimConfig c = config;
  c.horizon = measure_at;
  const TrialOutcome outcome = run_web_trial(c, stream_id, false);
  return spread_order_stats(outcome.final_user_rates);
}

MaxLoadStats balls_in_bins_max_load(std::size_t n_u, std::size_t n_s, std::size_t sigma,
                                    std::size_t trials, RngStream& rng) {
  if (n_u < 1 || n_s < 1 || sigma < 1 || trials < 1) {
    throw std::domain_error("balls_in_bins_max_load: counts must be >= 1");
  }
  MaxLoadStats stats;
  stats.bound = 3.0 * static_cast<double>(sigma) * static_cast<double>(n_u) /
                static_cast<double>(n_s);
  std::vector<std::size_t> load(n_s);
  for (std::size_t t = 0; t < trials; ++t) {
    std::fill(load.begin(), load.end(), 0);
    for (std::size_t u = 0; u < n_u; ++u) {
      for (ServerId s : sample_servers(n_s, sigma, rng)) ++load[s];
    }
    const std::size_t max_load = *std::max_element(load.begin(), load.end());
    stats.max_loads.push_back(max_load);
    if (static_cast<double>(max_load) <= stats.bound) ++stats.within_bound;
  }
  stats.min = *std::min_element(stats.max_loads.begin(), stats.max_loads.end());
  stats.max = *std::max_element(stats.max_loads.begin(), stats.max_loads.end());
  stats.mean = std::accumulate(stats.max_loads.begin(), stats.max_loads.end(), 0.0) /
               static_cast<double>(trials);
  return stats;
}

}  // namespace gwtw
