#include "gwtw/web_engine.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace gwtw {

HitWindow::HitWindow(std::size_t tau) : bits_(tau, 0) {
  if (tau == 0) throw std::domain_error("HitWindow: tau must be >= 1");
}

void HitWindow::push(bool hit) {
  hit_count_ -= bits_[next_];
  bits_[next_] = hit ? 1 : 0;
  hit_count_ += bits_[next_];
  next_ = (next_ + 1) % bits_.size();
}

std::size_t HitWindow::recount() const noexcept {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), 1));
}

std::vector<bool> HitWindow::bits() const {
  std::vector<bool> out;
  out.reserve(bits_.size());
  for (std::size_t i = 1; i <= bits_.size(); ++i) {
    out.push_back(bits_[(next_ + bits_.size() - i) % bits_.size()] != 0);
  }
  return out;
}

double UserState::best_rate() const noexcept {
  double best = 0.0;
  for (const auto& w : windows) best = std::max(best, w.rate());
  return best;
}

WebEngine::WebEngine(const SimConfig& config, RngStream rng)
    : config_(config), rng_(rng) {
  config_.validate();
  const ZipfSampler popularity(config_.n_c, config_.alpha);

  servers_.reserve(config_.n_s);
  for (std::size_t s = 0; s < config_.n_s; ++s) servers_.emplace_back(config_.kappa);

  users_.resize(config_.n_u);
  for (std::size_t u = 0; u < config_.n_u; ++u) {
    UserState& user = users_[u];
    user.id = static_cast<std::uint32_t>(u);
    user.content = popularity.sample(rng_);
    user.candidates =
        sample_servers(config_.n_s, config_.spread.spread_for(u, config_.n_u), rng_);
    user.windows.assign(user.candidates.size(), HitWindow(config_.tau));
  }
  undecided_ = users_.size();

  for (std::uint32_t u = 0; u < users_.size(); ++u) {
    schedule(u, sample_exponential(config_.lambda, rng_));
  }
}

void WebEngine::schedule(std::uint32_t user, double time) {
  queue_.push(RequestEvent{time, user, next_seq_++});
}

RequestEvent WebEngine::step() {
  const RequestEvent event = queue_.top();
  queue_.pop();
  process_request(event);
  return event;
}

void WebEngine::process_request(const RequestEvent& event) {
  clock_ = event.time;
  UserState& user = users_[event.user];
  ++user.requests_sent;
  ++total_requests_;

  std::optional<std::size_t> winner;
  for (std::size_t i = 0; i < user.candidates.size(); ++i) {
    const ServerId server = user.candidates[i];
    const AccessOutcome outcome = servers_[server].access(user.content);
    ++total_accesses_;
    if (!outcome.hit) ++total_misses_;
    if (observer_) observer_(event, server, outcome);

    HitWindow& window = user.windows[i];
    window.push(outcome.hit);
    if (!user.decided && !winner && window.all_hits()) winner = i;
  }

  if (winner) {
    const ServerId server = user.candidates[*winner];
    HitWindow window = std::move(user.windows[*winner]);
    user.candidates.assign(1, server);
    user.windows.clear();
    user.windows.push_back(std::move(window));
    user.decided = true;
    user.decision_time = event.time;
    user.decided_server = server;
    if (--undecided_ == 0) convergence_time_ = event.time;
  }

  schedule(event.user, event.time + sample_exponential(config_.lambda, rng_));
}

void WebEngine::sample(double time) {
  trace_.push_back(TraceSample{time, undecided_fraction(), minmax_hitrate()});
}

void WebEngine::emit_samples_through(double time, bool inclusive) {
  for (;;) {
    const double t = static_cast<double>(next_sample_) * config_.sample_interval;
    if (inclusive ? t > time : t >= time) break;
    sample(t);
    ++next_sample_;
  }
}

void WebEngine::run(double until) {
  if (until < clock_) throw std::invalid_argument("WebEngine::run: until precedes clock");
  if (stop_on_convergence_ && is_converged()) return;

  while (queue_.top().time <= until) {
    emit_samples_through(queue_.top().time, false);
    step();
    if (stop_on_convergence_ && is_converged()) {
      if (trace_.empty() || trace_.back().time < clock_) sample(clock_);
      return;
    }
  }
  emit_samples_through(until, true);
  clock_ = until;
}

bool WebEngine::is_optimal() const {
  if (!is_converged()) throw std::logic_error("is_optimal: state has not converged");
  std::vector<std::vector<ContentId>> demand(servers_.size());
  for (const auto& user : users_) demand[*user.decided_server].push_back(user.content);
  for (auto& items : demand) {
    std::sort(items.begin(), items.end());
    const auto distinct = std::unique(items.begin(), items.end()) - items.begin();
    if (static_cast<std::size_t>(distinct) > config_.kappa) return false;
  }
  return true;
}

double WebEngine::undecided_fraction() const noexcept {
  return static_cast<double>(undecided_) / static_cast<double>(users_.size());
}

double WebEngine::minmax_hitrate() const noexcept {
  double worst = std::numeric_limits<double>::infinity();
  for (const auto& user : users_) worst = std::min(worst, user.best_rate());
  return worst;
}

TrialOutcome summarize(const WebEngine& engine) {
  TrialOutcome out;
  if (engine.is_converged()) {
    out.status = engine.is_optimal() ? TrialStatus::converged_optimal
                                     : TrialStatus::converged_nonoptimal;
    out.convergence_time = engine.convergence_time();
  }
  out.final_user_rates.reserve(engine.users().size());
  for (const auto& user : engine.users()) out.final_user_rates.push_back(user.best_rate());
  out.trace = engine.trace();
  return out;
}

TrialOutcome run_web_trial(const SimConfig& config, std::uint64_t stream_id,
                           bool stop_on_convergence) {
  WebEngine engine(config, RngStream(config.seed, stream_id));
  engine.set_stop_on_convergence(stop_on_convergence);
  engine.run(config.horizon);
  return summarize(engine);
}

}  // namespace gwtw
