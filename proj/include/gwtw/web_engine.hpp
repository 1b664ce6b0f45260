#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <queue>
#include <span>
#include <vector>

#include "gwtw/config.hpp"
#include "gwtw/distributions.hpp"
#include "gwtw/lru_cache.hpp"
#include "gwtw/rng.hpp"
#include "gwtw/trial_outcome.hpp"

namespace gwtw {

/// Sliding window of the last tau hit/miss bits for one candidate server.
/// Starts as tau misses, so a full window of hits needs tau real hits.
class HitWindow {
 public:
  explicit HitWindow(std::size_t tau);

  void push(bool hit);

  std::size_t length() const noexcept { return bits_.size(); }
  std::size_t hit_count() const noexcept { return hit_count_; }
  double rate() const noexcept {
    return static_cast<double>(hit_count_) / static_cast<double>(bits_.size());
  }
  bool all_hits() const noexcept { return hit_count_ == bits_.size(); }

  /// Hit count recomputed from the buffer.
  std::size_t recount() const noexcept;

  /// Window contents, most recent first.
  std::vector<bool> bits() const;

 private:
  std::vector<std::uint8_t> bits_;
  std::size_t next_ = 0;  // slot that the next push overwrites (the oldest)
  std::size_t hit_count_ = 0;
};

struct UserState {
  std::uint32_t id = 0;
  ContentId content = 0;
  std::vector<ServerId> candidates;  // ascending
  std::vector<HitWindow> windows;    // parallel to candidates
  bool decided = false;
  std::optional<double> decision_time;
  std::optional<ServerId> decided_server;
  std::uint64_t requests_sent = 0;

  /// Best windowed hit rate over the current candidates.
  double best_rate() const noexcept;
};

struct RequestEvent {
  double time = 0.0;
  std::uint32_t user = 0;
  std::uint64_t seq = 0;

  friend auto operator<=>(const RequestEvent&, const RequestEvent&) = default;
};

/// Continuous-time GoWithTheWinner simulation: every user sends Poisson
/// requests for its one content item to all of its candidate servers, keeps
/// a hit window per candidate, and commits to the lowest-id candidate whose
/// window is all hits.
class WebEngine {
 public:
  /// Called once per cache access, in candidate order, before any decision.
  using RequestObserver =
      std::function<void(const RequestEvent&, ServerId, const AccessOutcome&)>;

  WebEngine(const SimConfig& config, RngStream rng);

  /// Processes the queue head. Returns the processed event.
  RequestEvent step();

  /// Processes events up to and including time `until`, or until every user
  /// has decided when stop_on_convergence() is set. Trace samples are taken
  /// at multiples of the sample interval.
  void run(double until);

  bool is_converged() const noexcept { return undecided_ == 0; }

  /// Every server's decided users request at most kappa distinct items.
  /// Throws std::logic_error unless converged.
  bool is_optimal() const;

  double undecided_fraction() const noexcept;
  double minmax_hitrate() const noexcept;

  void set_stop_on_convergence(bool stop) noexcept { stop_on_convergence_ = stop; }
  bool stop_on_convergence() const noexcept { return stop_on_convergence_; }
  void set_observer(RequestObserver observer) { observer_ = std::move(observer); }

  const SimConfig& config() const noexcept { return config_; }
  double clock() const noexcept { return clock_; }
  std::optional<double> convergence_time() const noexcept { return convergence_time_; }
  std::span<const UserState> users() const noexcept { return users_; }
  std::span<const LruCache> servers() const noexcept { return servers_; }
  const std::vector<TraceSample>& trace() const noexcept { return trace_; }
  const RequestEvent& next_event() const { return queue_.top(); }
  std::size_t pending_events() const noexcept { return queue_.size(); }

  std::uint64_t total_requests() const noexcept { return total_requests_; }
  std::uint64_t total_cache_accesses() const noexcept { return total_accesses_; }
  std::uint64_t total_misses() const noexcept { return total_misses_; }

 private:
  void process_request(const RequestEvent& event);
  void schedule(std::uint32_t user, double time);
  void sample(double time);
  void emit_samples_through(double time, bool inclusive);

  SimConfig config_;
  RngStream rng_;
  std::vector<UserState> users_;
  std::vector<LruCache> servers_;
  std::priority_queue<RequestEvent, std::vector<RequestEvent>, std::greater<>> queue_;
  std::vector<TraceSample> trace_;
  RequestObserver observer_;

  double clock_ = 0.0;
  std::uint64_t next_seq_ = 0;
  std::uint64_t next_sample_ = 0;  // index k of the next sample at k * interval
  std::size_t undecided_ = 0;
  std::optional<double> convergence_time_;
  bool stop_on_convergence_ = true;

  std::uint64_t total_requests_ = 0;
  std::uint64_t total_accesses_ = 0;
  std::uint64_t total_misses_ = 0;
};

/// Runs one web trial to the config horizon (or convergence) and classifies
/// the final state.
TrialOutcome run_web_trial(const SimConfig& config, std::uint64_t stream_id,
                           bool stop_on_convergence = true);

/// Classifies a finished engine into a TrialOutcome.
TrialOutcome summarize(const WebEngine& engine);

}  // namespace gwtw
