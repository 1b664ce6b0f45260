#include <doctest.h>

#include <algorithm>
#include <set>
#include <stdexcept>
#include <vector>

#include "gwtw/metrics.hpp"
#include "gwtw/web_engine.hpp"

using namespace gwtw;

namespace {

SimConfig default_config() {
  SimConfig c;
  c.n_u = c.n_s = c.n_c = 1000;
  c.kappa = 2;
  c.spread = SpreadPolicy::uniform(2);
  c.tau = 20;
  c.alpha = 0.65;
  c.lambda = 1.0;
  c.seed = 42;
  return c;
}

// One user, two servers, one content item: every request after the first
// hits on both candidates.
SimConfig lone_user(std::size_t tau) {
  SimConfig c;
  c.n_u = 1;
  c.n_s = 2;
  c.n_c = 1;
  c.kappa = 1;
  c.spread = SpreadPolicy::uniform(2);
  c.tau = tau;
  c.seed = 3;
  return c;
}

bool non_increasing_undecided(const std::vector<TraceSample>& trace) {
  for (std::size_t i = 1; i < trace.size(); ++i) {
    if (trace[i].undecided_fraction > trace[i - 1].undecided_fraction) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("HitWindow") {
  HitWindow w(3);
  CHECK(w.hit_count() == 0);
  CHECK(w.rate() == 0.0);
  w.push(true);
  w.push(true);
  CHECK(w.bits() == std::vector<bool>{true, true, false});
  CHECK_FALSE(w.all_hits());
  w.push(true);
  CHECK(w.all_hits());
  CHECK(w.rate() == 1.0);
  w.push(false);
  CHECK(w.bits() == std::vector<bool>{false, true, true});
  CHECK(w.hit_count() == 2);
  CHECK(w.recount() == 2);
  CHECK_THROWS_AS(HitWindow(0), std::domain_error);
}

TEST_CASE("init_state") {
  SUBCASE("sigma = 2 gives two distinct candidates each") {
    const WebEngine engine(default_config(), RngStream(42, 0));
    for (const auto& u : engine.users()) {
      REQUIRE(u.candidates.size() == 2);
      CHECK(u.candidates[0] < u.candidates[1]);
      CHECK(u.windows.size() == 2);
      CHECK_FALSE(u.decided);
      CHECK(u.content >= 1);
      CHECK(u.content <= 1000);
    }
    CHECK(engine.pending_events() == 1000);
    CHECK(engine.undecided_fraction() == 1.0);
    CHECK(engine.minmax_hitrate() == 0.0);
    CHECK(minmax_hitrate(engine) == 0.0);
    CHECK_FALSE(engine.is_converged());
    CHECK(engine.next_event().time > 0.0);
    for (const auto& s : engine.servers()) CHECK(s.size() == 0);
  }
  SUBCASE("mixed spread f = 0.7 splits 700 / 300") {
    SimConfig c = default_config();
    c.spread = SpreadPolicy::mixed(0.7);
    const WebEngine engine(c, RngStream(42, 0));
    std::size_t two = 0, one = 0;
    for (const auto& u : engine.users()) {
      if (u.candidates.size() == 2) ++two;
      if (u.candidates.size() == 1) ++one;
    }
    CHECK(two == 700);
    CHECK(one == 300);
  }
  SUBCASE("invalid configs are rejected") {
    SimConfig c = default_config();
    c.spread = SpreadPolicy::uniform(1001);
    CHECK_THROWS_AS(WebEngine(c, RngStream(1, 0)), ConfigError);
    c = default_config();
    c.lambda = 0.0;
    CHECK_THROWS_AS(WebEngine(c, RngStream(1, 0)), ConfigError);
  }
}

TEST_CASE("a full window of hits decides on the lowest-id candidate") {
  WebEngine engine(lone_user(3), RngStream(3, 0));
  const auto& user = engine.users()[0];

  engine.step();  // cold misses on both servers
  CHECK(user.windows[0].hit_count() == 0);
  engine.step();
  engine.step();
  // Two hits so far: cannot decide before tau hits accumulate.
  CHECK(user.requests_sent == 3);
  CHECK(user.windows[0].bits() == std::vector<bool>{true, true, false});
  CHECK_FALSE(user.decided);

  const auto fourth = engine.step();
  CHECK(user.decided);
  CHECK(user.candidates == std::vector<ServerId>{0});
  CHECK(user.decided_server == ServerId{0});
  CHECK(user.decision_time == fourth.time);
  CHECK(engine.is_converged());
  CHECK(engine.convergence_time() == fourth.time);
  CHECK(engine.is_optimal());

  // A decided user fans out to its one server and keeps updating the window.
  const auto accesses = engine.total_cache_accesses();
  CHECK(accesses == 8);
  engine.step();
  CHECK(engine.total_cache_accesses() == accesses + 1);
  CHECK(user.windows.size() == 1);
  CHECK(user.windows[0].all_hits());
  CHECK(user.requests_sent == 5);
}

TEST_CASE("tau = 1 decides on the first hit") {
  WebEngine engine(lone_user(1), RngStream(3, 0));
  engine.step();
  CHECK_FALSE(engine.users()[0].decided);
  engine.step();
  CHECK(engine.users()[0].decided);
}

TEST_CASE("run stops at convergence and samples the trace") {
  WebEngine engine(lone_user(3), RngStream(3, 0));
  engine.run(0.0);
  CHECK(engine.total_requests() == 0);
  CHECK(engine.trace().size() == 1);
  CHECK(engine.trace()[0].time == 0.0);
  CHECK(engine.trace()[0].undecided_fraction == 1.0);

  engine.run(1000.0);
  CHECK(engine.is_converged());
  CHECK(engine.total_requests() == 4);
  CHECK(engine.clock() == engine.convergence_time());
  CHECK(engine.trace().back().undecided_fraction == 0.0);
  CHECK(engine.trace().back().time == engine.clock());
  CHECK_THROWS_AS(engine.run(0.0), std::invalid_argument);
}

TEST_CASE("is_optimal") {
  SUBCASE("requires convergence") {
    const WebEngine engine(lone_user(3), RngStream(3, 0));
    CHECK_THROWS_AS((void)engine.is_optimal(), std::logic_error);
  }
  SUBCASE("many users on one item fit a one-slot cache") {
    SimConfig c;
    c.n_u = 5;
    c.n_s = 1;
    c.n_c = 1;
    c.kappa = 1;
    c.spread = SpreadPolicy::uniform(1);
    c.tau = 1;
    WebEngine engine(c, RngStream(1, 0));
    engine.run(100.0);
    REQUIRE(engine.is_converged());
    CHECK(engine.is_optimal());
  }
  SUBCASE("two distinct items fit kappa = 2, three do not") {
    for (std::size_t n_c : {2u, 3u}) {
      SimConfig c;
      c.n_u = 40;
      c.n_s = 1;
      c.n_c = n_c;
      c.alpha = 0.0;
      c.kappa = 2;
      c.spread = SpreadPolicy::uniform(1);
      c.tau = 1;
      WebEngine engine(c, RngStream(9, 0));
      std::set<ContentId> demanded;
      for (const auto& u : engine.users()) demanded.insert(u.content);
      REQUIRE(demanded.size() == n_c);
      engine.run(1000.0);
      REQUIRE(engine.is_converged());
      CHECK(engine.is_optimal() == (n_c == 2));
    }
  }
}

TEST_CASE("undecided_fraction arithmetic") {
  SimConfig c = default_config();
  const WebEngine fresh(c, RngStream(1, 0));
  CHECK(fresh.undecided_fraction() == 1.0);
  WebEngine engine(c, RngStream(42, 0));
  engine.run(1000.0);
  REQUIRE(engine.is_converged());
  CHECK(engine.undecided_fraction() == 0.0);
}

TEST_CASE("engine invariants hold on random small systems") {
  RngStream gen(1234, 0);
  for (int trial = 0; trial < 60; ++trial) {
    SimConfig c;
    c.n_u = 5 + gen.below(60);
    c.n_s = 2 + gen.below(20);
    c.n_c = 1 + gen.below(40);
    c.kappa = 1 + gen.below(4);
    c.alpha = 0.3 * static_cast<double>(gen.below(6));
    c.tau = 1 + gen.below(8);
    c.spread = SpreadPolicy::uniform(1 + gen.below(std::min<std::uint64_t>(c.n_s, 4)));
    c.lambda = 0.5 + static_cast<double>(gen.below(3));
    c.sample_interval = 0.5;
    c.seed = gen();
    CAPTURE(trial);

    WebEngine engine(c, RngStream(c.seed, 0));
    std::vector<std::size_t> initial_spread;
    for (const auto& u : engine.users()) initial_spread.push_back(u.candidates.size());

    std::uint64_t observed_accesses = 0;
    std::uint64_t expected_accesses = 0;
    engine.set_observer([&](const RequestEvent&, ServerId, const AccessOutcome&) {
      ++observed_accesses;
    });

    double last_time = 0.0;
    std::uint64_t last_seq = 0;
    for (int i = 0; i < 3000; ++i) {
      const auto& head = engine.next_event();
      const std::size_t fanout = engine.users()[head.user].candidates.size();
      const bool was_decided = engine.users()[head.user].decided;
      const RequestEvent ev = engine.step();
      expected_accesses += fanout;
      CHECK(ev.time >= last_time);
      if (i > 0 && ev.time == last_time) CHECK(ev.seq > last_seq);
      last_time = ev.time;
      last_seq = ev.seq;
      CHECK(engine.pending_events() == c.n_u);

      const auto& u = engine.users()[ev.user];
      if (u.decided && !was_decided) {
        CHECK(u.requests_sent >= c.tau);  // no decision before the tau-th request
        CHECK(u.decision_time == ev.time);
        CHECK(fanout == initial_spread[ev.user]);
      }
      if (was_decided) CHECK(u.decided);
      for (const auto& w : u.windows) CHECK(w.hit_count() == w.recount());
    }
    CHECK(observed_accesses == expected_accesses);
    CHECK(engine.total_cache_accesses() == expected_accesses);

    std::uint64_t sent = 0;
    for (const auto& u : engine.users()) {
      sent += u.requests_sent;
      if (u.decided) {
        CHECK(u.candidates.size() == 1);
        CHECK(u.decision_time.has_value());
      } else {
        CHECK(u.candidates.size() == initial_spread[u.id]);
      }
    }
    CHECK(sent == engine.total_requests());
    for (const auto& s : engine.servers()) CHECK(s.size() <= c.kappa);

    engine.run(engine.clock() + 50.0);
    CHECK(non_increasing_undecided(engine.trace()));
  }
}

TEST_CASE("identical seeds give identical runs") {
  const SimConfig c = default_config();
  const auto first = run_web_trial(c, 5);
  const auto second = run_web_trial(c, 5);
  CHECK(first.status == second.status);
  CHECK(first.convergence_time == second.convergence_time);
  REQUIRE(first.trace.size() == second.trace.size());
  for (std::size_t i = 0; i < first.trace.size(); ++i) {
    CHECK(first.trace[i].time == second.trace[i].time);
    CHECK(first.trace[i].undecided_fraction == second.trace[i].undecided_fraction);
    CHECK(first.trace[i].minmax_metric == second.trace[i].minmax_metric);
  }
  const auto other = run_web_trial(c, 6);
  CHECK(other.convergence_time != first.convergence_time);
}

TEST_CASE("two choices converge to an optimal state; one choice does not") {
  SimConfig c = default_config();
  const auto two = run_web_trial(c, 0);
  CHECK(two.status == TrialStatus::converged_optimal);
  CHECK(non_increasing_undecided(two.trace));

  c.spread = SpreadPolicy::uniform(1);
  const auto one = run_web_trial(c, 0, false);
  CHECK(one.status != TrialStatus::converged_optimal);
  CHECK(one.trace.back().minmax_metric < 0.9);
}

TEST_CASE("a converged optimal state keeps resident content") {
  const SimConfig c = default_config();
  for (std::uint64_t stream = 0; stream < 3; ++stream) {
    CAPTURE(stream);
    WebEngine engine(c, RngStream(c.seed, stream));
    engine.run(c.horizon);
    REQUIRE(engine.is_converged());
    REQUIRE(engine.is_optimal());

    // (server, item) pairs resident at convergence or inserted since.
    std::set<std::pair<ServerId, ContentId>> resident;
    for (ServerId s = 0; s < engine.servers().size(); ++s) {
      for (ContentId item : engine.servers()[s].entries()) resident.emplace(s, item);
    }
    std::size_t misses_after_resident = 0;
    engine.set_observer([&](const RequestEvent& ev, ServerId s, const AccessOutcome& out) {
      const std::pair<ServerId, ContentId> key{s, engine.users()[ev.user].content};
      if (!out.hit && resident.count(key) > 0) ++misses_after_resident;
      resident.insert(key);
    });
    engine.set_stop_on_convergence(false);
    engine.run(engine.clock() + 10.0 / c.lambda);
    CHECK(misses_after_resident == 0);

    // Enough further requests refill every window with hits.
    engine.run(engine.clock() + 10.0 * static_cast<double>(c.tau));
    CHECK(minmax_hitrate(engine) == 1.0);
  }
}
