#include "gwtw/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace gwtw {

double minmax_hitrate(const WebEngine& engine) noexcept { return engine.minmax_hitrate(); }

std::vector<double> order_statistics(std::span<const double> values,
                                     std::span<const double> percentiles) {
  if (values.empty()) throw std::domain_error("order_statistics: empty input");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const auto n = static_cast<double>(sorted.size());

  std::vector<double> out;
  out.reserve(percentiles.size());
  for (double p : percentiles) {
    if (!(p >= 0.0 && p <= 100.0)) {
      throw std::domain_error("order_statistics: percentile outside [0, 100]");
    }
    // The 1e-9 slack keeps p*n/100 that should be integral from rounding up.
    const double rank = std::max(1.0, std::ceil(p / 100.0 * n - 1e-9));
    out.push_back(sorted[static_cast<std::size_t>(rank) - 1]);
  }
  return out;
}

MeanStats mean_stats(std::span<const double> values) {
  MeanStats s;
  if (values.empty()) return s;
  const auto n = static_cast<double>(values.size());
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.standard_error = std::sqrt(ss / (n - 1.0) / n);
  }
  return s;
}

double median(std::vector<double> values) {
  if (values.empty()) throw std::domain_error("median: empty input");
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  if (values.size() % 2 == 1) return values[mid];
  return 0.5 * (values[mid - 1] + values[mid]);
}

namespace {

std::vector<double> average_ranks(std::span<const double> v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    const double r = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

double spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::domain_error("spearman: need two equal-length samples of size >= 2");
  }
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  const auto mx = mean_stats(rx).mean;
  const auto my = mean_stats(ry).mean;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace gwtw
