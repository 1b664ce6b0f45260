#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "gwtw/rng.hpp"

namespace gwtw {

using ContentId = std::uint32_t;  // popularity rank, 1-based
using ServerId = std::uint32_t;   // 0-based

/// Generalized harmonic number H(n, alpha) = sum_{k=1..n} k^-alpha.
/// Summed from k = n down to 1. Throws std::domain_error for n == 0 or
/// alpha < 0.
double harmonic(std::size_t n, double alpha);

/// Probability of rank k under the truncated power law over n_c items.
double zipf_pmf(std::size_t k, std::size_t n_c, double alpha);

/// Inverse-CDF sampler for the truncated power law. Immutable once built.
class ZipfSampler {
 public:
  ZipfSampler(std::size_t n_c, double alpha);

  ContentId sample(RngStream& rng) const;

  /// Exact pmf of rank k (1-based), computed from the stored normalizer.
  double pmf(std::size_t k) const;

  std::size_t n_c() const noexcept { return cdf_.size(); }
  double alpha() const noexcept { return alpha_; }
  double normalizer() const noexcept { return normalizer_; }
  std::span<const double> cdf() const noexcept { return cdf_; }

 private:
  double alpha_;
  double normalizer_;
  std::vector<double> cdf_;
};

/// Exponential variate with the given rate: -ln(u)/rate, u in (0, 1].
double sample_exponential(double rate, RngStream& rng);

/// sigma distinct server ids drawn uniformly from [0, n_s), ascending.
std::vector<ServerId> sample_servers(std::size_t n_s, std::size_t sigma,
                                     RngStream& rng);

}  // namespace gwtw
