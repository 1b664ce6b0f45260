#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace gwtw {

enum class Model { web, video };

const char* to_string(Model model) noexcept;

/// Invalid configuration value. field() names the offending key.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::invalid_argument(field + ": " + message), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// Number of candidate servers each user starts with.
///
/// Uniform: every user gets `sigma`. Mixed: the first round(f * n_u) users
/// get two candidates and the rest get one, so the average spread is 1 + f.
struct SpreadPolicy {
  std::size_t sigma = 2;
  std::optional<double> two_choice_fraction;

  static SpreadPolicy uniform(std::size_t sigma) { return {sigma, std::nullopt}; }
  static SpreadPolicy mixed(double f) { return {2, f}; }

  bool is_mixed() const noexcept { return two_choice_fraction.has_value(); }
  std::size_t two_choice_users(std::size_t n_u) const;
  std::size_t spread_for(std::size_t user, std::size_t n_u) const;
  std::size_t max_spread() const noexcept;
};

struct SimConfig {
  std::size_t n_u = 1000;
  std::size_t n_s = 1000;
  std::size_t n_c = 1000;
  double alpha = 0.65;
  double lambda = 1.0;     // per-user request rate (web)
  std::size_t kappa = 2;   // cache slots (web) or bitrate units (video)
  SpreadPolicy spread;
  std::size_t tau = 20;    // hit window length (web)
  double horizon = 1000.0; // time units (web) or steps (video)
  std::uint64_t seed = 1;
  double sample_interval = 1.0;

  /// Throws ConfigError naming the first violated field.
  void validate() const;
};

/// Users per unit of aggregate cache capacity: n_u / (kappa * n_s).
double load(const SimConfig& config);

}  // namespace gwtw
