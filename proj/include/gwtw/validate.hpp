#pragma once

#include <cstddef>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "gwtw/distributions.hpp"
#include "gwtw/lru_cache.hpp"
#include "gwtw/rng.hpp"

namespace gwtw {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Replays random access sequences (length <= 200, capacity <= 8, alphabet
/// <= 16) through `Cache` and ReferenceLru and compares every outcome and
/// the final contents. `Cache` needs the LruCache interface.
template <class Cache>
CheckResult check_lru_oracle(std::size_t sequences, std::uint64_t seed,
                             std::string name = "lru-oracle") {
  RngStream rng(seed, 0x1u);
  for (std::size_t seq = 0; seq < sequences; ++seq) {
    const std::size_t length = 1 + rng.below(200);
    const std::size_t capacity = 1 + rng.below(8);
    const std::size_t alphabet = 1 + rng.below(16);
    Cache cache(capacity);
    ReferenceLru oracle(capacity);
    for (std::size_t i = 0; i < length; ++i) {
      const auto item = static_cast<ContentId>(1 + rng.below(alphabet));
      const AccessOutcome got = cache.access(item);
      const AccessOutcome want = oracle.access(item);
      if (!(got == want) || cache.size() > capacity) {
        std::ostringstream detail;
        detail << "sequence " << seq << " access " << i << " item " << item
               << ": hit " << got.hit << " vs " << want.hit << ", size " << cache.size()
               << " capacity " << capacity;
        return {std::move(name), false, detail.str()};
      }
    }
    if (cache.entries() != oracle.entries()) {
      return {std::move(name), false,
              "sequence " + std::to_string(seq) + ": final recency order differs"};
    }
  }
  return {std::move(name), true, std::to_string(sequences) + " sequences match"};
}

struct ChiSquareResult {
  double statistic = 0.0;
  std::size_t degrees_of_freedom = 0;
  double p_value = 0.0;
};

/// Pearson goodness of fit of `draws` samples against the sampler's pmf.
/// Adjacent ranks are pooled until each bin expects at least 5 draws.
ChiSquareResult zipf_chi_square(const ZipfSampler& sampler, std::size_t draws,
                                RngStream& rng);

CheckResult check_zipf_chi_square(std::size_t n_c, double alpha, std::size_t draws,
                                  std::uint64_t seed, double significance = 0.001);

/// Max load <= 3 * sigma * n_u / n_s in at least `required_fraction` of trials.
CheckResult check_balls_in_bins(std::size_t n_u, std::size_t n_s, std::size_t sigma,
                                std::size_t trials, std::uint64_t seed,
                                double required_fraction = 0.95);

/// LRU oracle, Zipf fit for three settings, and balls-into-bins at
/// n_u = ceil(n_s ln n_s) with sigma = 1 and 2.
std::vector<CheckResult> run_validators(std::uint64_t seed);

}  // namespace gwtw
