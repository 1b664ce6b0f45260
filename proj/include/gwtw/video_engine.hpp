#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "gwtw/config.hpp"
#include "gwtw/distributions.hpp"
#include "gwtw/rng.hpp"
#include "gwtw/trial_outcome.hpp"

namespace gwtw {

struct VideoUser {
  ContentId content = 0;
  std::vector<ServerId> candidates;  // ascending
  std::vector<double> bitrates;      // last step's bitrate per candidate
  bool decided = false;
  std::optional<std::size_t> decision_step;

  double best_bitrate() const noexcept;
};

/// Bitrate a server with `capacity` units gives each of `connections`
/// users, capped at the unit requirement.
double shared_bitrate(std::size_t capacity, std::size_t connections) noexcept;

/// Discrete-time MaxBitRate simulation. Each step every server splits its
/// capacity evenly over all users holding it as a candidate; an undecided
/// user that sees a full unit from some candidate commits to the lowest-id
/// such server. Connection counts and decisions are computed synchronously.
class VideoEngine {
 public:
  VideoEngine(const SimConfig& config, RngStream rng);

  void step();

  /// min over users of the best bitrate seen in the last step. 0 before the
  /// first step.
  double minmax_bitrate() const noexcept;

  bool all_decided() const noexcept { return undecided_ == 0; }
  double undecided_fraction() const noexcept;

  std::size_t step_count() const noexcept { return step_; }
  std::size_t kappa() const noexcept { return config_.kappa; }
  std::span<const VideoUser> users() const noexcept { return users_; }
  /// Connection counts N_s used in the last step.
  std::span<const std::size_t> connections() const noexcept { return connections_; }
  /// N_s recounted from the current candidate sets.
  std::vector<std::size_t> recount_connections() const;

 private:
  SimConfig config_;
  std::vector<VideoUser> users_;
  std::vector<std::size_t> connections_;
  std::size_t step_ = 0;
  std::size_t undecided_ = 0;
};

/// Steps until every user is decided with minmax bitrate 1, or max_steps.
/// Throws std::invalid_argument when max_steps == 0.
TrialOutcome video_run(VideoEngine& engine, std::size_t max_steps);

/// One video trial with max_steps = config.horizon.
TrialOutcome run_video_trial(const SimConfig& config, std::uint64_t stream_id);

}  // namespace gwtw
