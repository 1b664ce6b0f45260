#include "gwtw/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace gwtw {

double harmonic(std::size_t n, double alpha) {
  if (n == 0) throw std::domain_error("harmonic: n must be >= 1");
  if (!(alpha >= 0.0)) throw std::domain_error("harmonic: alpha must be >= 0");
  // Smallest terms first, Kahan-compensated.
  double sum = 0.0;
  double carry = 0.0;
  for (std::size_t k = n; k >= 1; --k) {
    const double term = std::pow(static_cast<double>(k), -alpha) - carry;
    const double next = sum + term;
    carry = (next - sum) - term;
    sum = next;
  }
  return sum;
}

double zipf_pmf(std::size_t k, std::size_t n_c, double alpha) {
  if (k < 1 || k > n_c) {
    throw std::domain_error("zipf_pmf: rank " + std::to_string(k) +
                            " outside [1, " + std::to_string(n_c) + "]");
  }
  return 1.0 / (std::pow(static_cast<double>(k), alpha) * harmonic(n_c, alpha));
}

ZipfSampler::ZipfSampler(std::size_t n_c, double alpha)
    : alpha_(alpha), normalizer_(harmonic(n_c, alpha)), cdf_(n_c) {
  // Kahan-compensated prefix sums over the same terms as the normalizer.
  double sum = 0.0;
  double carry = 0.0;
  for (std::size_t k = 1; k <= n_c; ++k) {
    const double term = std::pow(static_cast<double>(k), -alpha) - carry;
    const double next = sum + term;
    carry = (next - sum) - term;
    sum = next;
    cdf_[k - 1] = sum / normalizer_;
  }
  cdf_.back() = 1.0;
}

ContentId ZipfSampler::sample(RngStream& rng) const {
  const double u = rng.uniform01();
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  return static_cast<ContentId>(std::distance(cdf_.begin(), it) + 1);
}

double ZipfSampler::pmf(std::size_t k) const {
  if (k < 1 || k > cdf_.size()) {
    throw std::domain_error("ZipfSampler::pmf: rank out of range");
  }
  return 1.0 / (std::pow(static_cast<double>(k), alpha_) * normalizer_);
}

double sample_exponential(double rate, RngStream& rng) {
  if (!(rate > 0.0)) throw std::domain_error("sample_exponential: rate must be > 0");
  // Midpoint of a 2^-53 grid cell: u lies strictly inside (0, 1).
  const double u = (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
  return -std::log(u) / rate;
}

std::vector<ServerId> sample_servers(std::size_t n_s, std::size_t sigma,
                                     RngStream& rng) {
  if (sigma < 1 || sigma > n_s) {
    throw std::domain_error("sample_servers: need 1 <= sigma <= n_s (sigma=" +
                            std::to_string(sigma) + ", n_s=" + std::to_string(n_s) +
                            ")");
  }
  // Floyd's subset sampling. Small draws use a linear membership scan.
  std::vector<ServerId> chosen;
  chosen.reserve(sigma);
  if (sigma <= 16) {
    for (std::size_t j = n_s - sigma; j < n_s; ++j) {
      const auto t = static_cast<ServerId>(rng.below(j + 1));
      const bool seen = std::find(chosen.begin(), chosen.end(), t) != chosen.end();
      chosen.push_back(seen ? static_cast<ServerId>(j) : t);
    }
  } else {
    std::vector<bool> taken(n_s, false);
    for (std::size_t j = n_s - sigma; j < n_s; ++j) {
      auto t = static_cast<ServerId>(rng.below(j + 1));
      if (taken[t]) t = static_cast<ServerId>(j);
      taken[t] = true;
      chosen.push_back(t);
    }
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

}  // namespace gwtw
