#include "gwtw/video_engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace gwtw {

double VideoUser::best_bitrate() const noexcept {
  double best = 0.0;
  for (double b : bitrates) best = std::max(best, b);
  return best;
}

double shared_bitrate(std::size_t capacity, std::size_t connections) noexcept {
  if (connections <= capacity) return 1.0;
  return static_cast<double>(capacity) / static_cast<double>(connections);
}

VideoEngine::VideoEngine(const SimConfig& config, RngStream rng) : config_(config) {
  config_.validate();
  const ZipfSampler popularity(config_.n_c, config_.alpha);
  users_.resize(config_.n_u);
  for (std::size_t u = 0; u < users_.size(); ++u) {
    VideoUser& user = users_[u];
    user.content = popularity.sample(rng);
    user.candidates =
        sample_servers(config_.n_s, config_.spread.spread_for(u, config_.n_u), rng);
    user.bitrates.assign(user.candidates.size(), 0.0);
  }
  connections_.assign(config_.n_s, 0);
  undecided_ = users_.size();
}

std::vector<std::size_t> VideoEngine::recount_connections() const {
  std::vector<std::size_t> counts(config_.n_s, 0);
  for (const auto& user : users_) {
    for (ServerId s : user.candidates) ++counts[s];
  }
  return counts;
}

void VideoEngine::step() {
  connections_ = recount_connections();

  for (auto& user : users_) {
    std::optional<std::size_t> winner;
    for (std::size_t i = 0; i < user.candidates.size(); ++i) {
      user.bitrates[i] = shared_bitrate(config_.kappa, connections_[user.candidates[i]]);
      if (!winner && user.bitrates[i] == 1.0) winner = i;
    }
    if (!user.decided && winner) {
      user.candidates.assign(1, user.candidates[*winner]);
      user.bitrates.assign(1, 1.0);
      user.decided = true;
      user.decision_step = step_ + 1;
      --undecided_;
    }
  }
  ++step_;
}

double VideoEngine::minmax_bitrate() const noexcept {
  if (step_ == 0) return 0.0;
  double worst = std::numeric_limits<double>::infinity();
  for (const auto& user : users_) worst = std::min(worst, user.best_bitrate());
  return worst;
}

double VideoEngine::undecided_fraction() const noexcept {
  return static_cast<double>(undecided_) / static_cast<double>(users_.size());
}

TrialOutcome video_run(VideoEngine& engine, std::size_t max_steps) {
  if (max_steps == 0) throw std::invalid_argument("video_run: max_steps must be >= 1");
  TrialOutcome out;
  out.trace.push_back({static_cast<double>(engine.step_count()),
                       engine.undecided_fraction(), engine.minmax_bitrate()});
  for (std::size_t i = 0; i < max_steps; ++i) {
    engine.step();
    const double minmax = engine.minmax_bitrate();
    out.trace.push_back({static_cast<double>(engine.step_count()),
                         engine.undecided_fraction(), minmax});
    if (engine.all_decided() && minmax == 1.0) {
      // Connection counts only fall once everyone has decided, so no
      // server can be overloaded here.
      out.status = TrialStatus::converged_optimal;
      out.convergence_time = static_cast<double>(engine.step_count());
      break;
    }
  }
  out.final_user_rates.reserve(engine.users().size());
  for (const auto& user : engine.users()) out.final_user_rates.push_back(user.best_bitrate());
  return out;
}

TrialOutcome run_video_trial(const SimConfig& config, std::uint64_t stream_id) {
  VideoEngine engine(config, RngStream(config.seed, stream_id));
  const auto max_steps = static_cast<std::size_t>(std::llround(config.horizon));
  return video_run(engine, max_steps);
}

}  // namespace gwtw
