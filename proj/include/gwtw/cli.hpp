#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "gwtw/config.hpp"
#include "gwtw/experiments.hpp"
#include "gwtw/trial_outcome.hpp"

namespace gwtw {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitIoError = 3;
inline constexpr int kExitValidationFailure = 4;

class IoError : public std::runtime_error {
 public:
  IoError(std::string path, const std::string& message)
      : std::runtime_error(path + ": " + message), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

struct SweepSpec {
  SweepAxis axis = SweepAxis::tau;
  std::vector<double> values;
};

/// A parsed experiment document.
///
/// JSON keys: model ("web" | "video"), n_u, n_s, n_c, kappa, sigma or f,
/// tau (web), alpha (0.65), lambda (1), horizon (1000 web / 200 video),
/// seed (1), sample_interval (1), trials (20), measure_at, output (".")
/// and an optional sweep object {"axis", "values", "trials"}.
struct ExperimentSpec {
  Model model = Model::web;
  SimConfig config;
  std::size_t trials = 20;
  std::optional<SweepSpec> sweep;
  /// Web only: run to this time without stopping at convergence and also
  /// report order statistics of per-user hit rates.
  std::optional<double> measure_at;
  std::string output = ".";
};

/// Throws ConfigError naming the offending field for unknown keys, type
/// mismatches, missing required keys and invariant violations.
ExperimentSpec parse_spec(std::string_view json_text);

/// Reads and parses a spec file. Throws IoError if unreadable.
ExperimentSpec load_spec(const std::string& path);

/// Fixed-point with six fractional digits, '.' separator.
std::string format_fixed(double value);

void write_trace_csv(std::ostream& out, std::span<const TraceSample> trace);
void write_outcome_csv(std::ostream& out, const TrialOutcome& outcome, std::uint64_t seed);
void write_sweep_csv(std::ostream& out, const SweepResult& result);
/// Per sweep point: order statistics averaged over the point's trials.
void write_order_stats_csv(std::ostream& out, const SweepResult& result);

/// Single trial (stream 0): writes trace.csv and outcome.csv, plus
/// order_stats.csv when measure_at is set.
TrialOutcome cmd_run(const ExperimentSpec& spec, std::ostream& log);

/// Sweep: writes sweep.csv, plus order_stats.csv when measure_at is set.
SweepResult cmd_sweep(const ExperimentSpec& spec, std::size_t jobs, std::ostream& log);

/// Runs every validator, prints one PASS/FAIL line each. True iff all pass.
bool cmd_validate(std::ostream& report, std::uint64_t seed);

}  // namespace gwtw
