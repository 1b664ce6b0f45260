#pragma once

#include <span>
#include <vector>

#include "gwtw/config.hpp"
#include "gwtw/web_engine.hpp"

namespace gwtw {

/// Minimum over users of the best per-candidate windowed hit rate.
double minmax_hitrate(const WebEngine& engine) noexcept;

/// Order statistics by nearest rank on the ascending sort. A percentile of
/// 0 selects the minimum; p in (0, 100] selects element ceil(p/100 * n).
/// Throws std::domain_error on empty input or a percentile outside [0, 100].
std::vector<double> order_statistics(std::span<const double> values,
                                     std::span<const double> percentiles);

/// Mean and standard error of the mean. Standard error is 0 for n < 2.
struct MeanStats {
  double mean = 0.0;
  double standard_error = 0.0;
};
MeanStats mean_stats(std::span<const double> values);

/// Median of a non-empty sample (average of the middle pair when even).
double median(std::vector<double> values);

/// Spearman rank correlation with average ranks for ties.
double spearman(std::span<const double> x, std::span<const double> y);

}  // namespace gwtw
