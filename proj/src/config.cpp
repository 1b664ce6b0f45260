#include "gwtw/config.hpp"

#include <cmath>

namespace gwtw {

const char* to_string(Model model) noexcept {
  return model == Model::web ? "web" : "video";
}

std::size_t SpreadPolicy::two_choice_users(std::size_t n_u) const {
  if (!two_choice_fraction) return sigma >= 2 ? n_u : 0;
  return static_cast<std::size_t>(std::llround(*two_choice_fraction * static_cast<double>(n_u)));
}

std::size_t SpreadPolicy::spread_for(std::size_t user, std::size_t n_u) const {
  if (!two_choice_fraction) return sigma;
  return user < two_choice_users(n_u) ? 2 : 1;
}

std::size_t SpreadPolicy::max_spread() const noexcept {
  if (!two_choice_fraction) return sigma;
  return *two_choice_fraction > 0.0 ? 2 : 1;
}

void SimConfig::validate() const {
  if (n_u < 1) throw ConfigError("n_u", "must be >= 1");
  if (n_s < 1) throw ConfigError("n_s", "must be >= 1");
  if (n_c < 1) throw ConfigError("n_c", "must be >= 1");
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw ConfigError("alpha", "must be finite and >= 0");
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw ConfigError("lambda", "must be finite and > 0");
  if (kappa < 1) throw ConfigError("kappa", "must be >= 1");
  if (tau < 1) throw ConfigError("tau", "must be >= 1");
  if (spread.two_choice_fraction) {
    const double f = *spread.two_choice_fraction;
    if (!(f >= 0.0 && f <= 1.0)) throw ConfigError("f", "must lie in [0, 1]");
  } else if (spread.sigma < 1) {
    throw ConfigError("sigma", "must be >= 1");
  }
  if (spread.max_spread() > n_s) {
    throw ConfigError(spread.is_mixed() ? "f" : "sigma", "spread exceeds n_s");
  }
  if (!(horizon >= 0.0) || !std::isfinite(horizon)) throw ConfigError("horizon", "must be finite and >= 0");
  if (!(sample_interval > 0.0) || !std::isfinite(sample_interval)) {
    throw ConfigError("sample_interval", "must be finite and > 0");
  }
}

double load(const SimConfig& config) {
  return static_cast<double>(config.n_u) /
         (static_cast<double>(config.kappa) * static_cast<double>(config.n_s));
}

}  // namespace gwtw
