#include "gwtw/validate.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <cstdio>

#include "gwtw/experiments.hpp"

namespace gwtw {

ChiSquareResult zipf_chi_square(const ZipfSampler& sampler, std::size_t draws,
                                RngStream& rng) {
  const std::size_t n_c = sampler.n_c();
  std::vector<std::size_t> counts(n_c, 0);
  for (std::size_t i = 0; i < draws; ++i) ++counts[sampler.sample(rng) - 1];

  const auto total = static_cast<double>(draws);
  std::vector<std::pair<double, double>> bins;  // (observed, expected)
  double observed = 0.0;
  double expected = 0.0;
  for (std::size_t k = 1; k <= n_c; ++k) {
    observed += static_cast<double>(counts[k - 1]);
    expected += sampler.pmf(k) * total;
    if (expected >= 5.0) {
      bins.emplace_back(observed, expected);
      observed = expected = 0.0;
    }
  }
  if (expected > 0.0) {
    if (bins.empty()) {
      bins.emplace_back(observed, expected);
    } else {
      bins.back().first += observed;
      bins.back().second += expected;
    }
  }

  ChiSquareResult result;
  for (const auto& [o, e] : bins) result.statistic += (o - e) * (o - e) / e;
  result.degrees_of_freedom = bins.size() > 1 ? bins.size() - 1 : 0;
  result.p_value =
      result.degrees_of_freedom == 0
          ? 1.0
          : boost::math::gamma_q(0.5 * static_cast<double>(result.degrees_of_freedom),
                                 0.5 * result.statistic);
  return result;
}

CheckResult check_zipf_chi_square(std::size_t n_c, double alpha, std::size_t draws,
                                  std::uint64_t seed, double significance) {
  const ZipfSampler sampler(n_c, alpha);
  RngStream rng(seed, 0x2u);
  const auto r = zipf_chi_square(sampler, draws, rng);
  char detail[160];
  std::snprintf(detail, sizeof detail, "chi2=%.3f df=%zu p=%.4f (reject below %.4f)",
                r.statistic, r.degrees_of_freedom, r.p_value, significance);
  char name[64];
  std::snprintf(name, sizeof name, "zipf-chi2 n_c=%zu alpha=%g", n_c, alpha);
  return {name, r.p_value >= significance, detail};
}

CheckResult check_balls_in_bins(std::size_t n_u, std::size_t n_s, std::size_t sigma,
                                std::size_t trials, std::uint64_t seed,
                                double required_fraction) {
  RngStream rng(seed, 0x3u + sigma);
  const auto stats = balls_in_bins_max_load(n_u, n_s, sigma, trials, rng);
  char detail[200];
  std::snprintf(detail, sizeof detail,
                "max load mean=%.2f range=[%zu, %zu] bound=%.2f within=%zu/%zu",
                stats.mean, stats.min, stats.max, stats.bound, stats.within_bound,
                stats.max_loads.size());
  char name[80];
  std::snprintf(name, sizeof name, "balls-in-bins n_u=%zu n_s=%zu sigma=%zu", n_u, n_s,
                sigma);
  return {name, stats.fraction_within_bound() >= required_fraction, detail};
}

std::vector<CheckResult> run_validators(std::uint64_t seed) {
  std::vector<CheckResult> checks;
  checks.push_back(check_lru_oracle<LruCache>(10000, seed));
  checks.push_back(check_zipf_chi_square(10, 0.0, 100000, seed));
  checks.push_back(check_zipf_chi_square(100, 0.65, 100000, seed));
  checks.push_back(check_zipf_chi_square(1000, 1.5, 100000, seed));
  const std::size_t n_s = 100;
  const auto n_u = static_cast<std::size_t>(std::ceil(static_cast<double>(n_s) *
                                                      std::log(static_cast<double>(n_s))));
  checks.push_back(check_balls_in_bins(n_u, n_s, 1, 100, seed));
  checks.push_back(check_balls_in_bins(n_u, n_s, 2, 100, seed));
  return checks;
}

}  // namespace gwtw
