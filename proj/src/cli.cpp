#include "gwtw/cli.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "gwtw/validate.hpp"
#include "gwtw/video_engine.hpp"
#include "gwtw/web_engine.hpp"

namespace gwtw {

namespace {

using nlohmann::json;

std::uint64_t as_uint(const std::string& key, const json& v) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return v.get<std::uint64_t>();
  throw ConfigError(key, "expected a non-negative integer");
}

std::size_t as_count(const std::string& key, const json& v) {
  const auto n = as_uint(key, v);
  if (n < 1) throw ConfigError(key, "must be >= 1");
  return static_cast<std::size_t>(n);
}

double as_real(const std::string& key, const json& v) {
  if (!v.is_number()) throw ConfigError(key, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(key, "must be finite");
  return x;
}

std::string as_string(const std::string& key, const json& v) {
  if (!v.is_string()) throw ConfigError(key, "expected a string");
  return v.get<std::string>();
}

SweepSpec parse_sweep(const json& block, std::optional<std::size_t>& trials) {
  if (!block.is_object()) throw ConfigError("sweep", "expected an object");
  SweepSpec sweep;
  bool have_axis = false;
  bool have_values = false;
  for (const auto& [key, value] : block.items()) {
    if (key == "axis") {
      const auto name = as_string("sweep.axis", value);
      const auto axis = parse_axis(name);
      if (!axis) {
        throw ConfigError("sweep.axis", "unknown axis '" + name +
                                            "' (expected tau, sigma, alpha, nu_over_ns or f)");
      }
      sweep.axis = *axis;
      have_axis = true;
    } else if (key == "values") {
      if (!value.is_array() || value.empty()) {
        throw ConfigError("sweep.values", "expected a non-empty array of numbers");
      }
      for (const auto& v : value) sweep.values.push_back(as_real("sweep.values", v));
      have_values = true;
    } else if (key == "trials") {
      trials = as_count("sweep.trials", value);
    } else {
      throw ConfigError("sweep." + key, "unknown key");
    }
  }
  if (!have_axis) throw ConfigError("sweep.axis", "required");
  if (!have_values) throw ConfigError("sweep.values", "required");
  return sweep;
}

void require(bool present, const char* field) {
  if (!present) throw ConfigError(field, "required");
}

}  // namespace

ExperimentSpec parse_spec(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError("document", std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("document", "expected a JSON object");

  ExperimentSpec spec;
  SimConfig& c = spec.config;
  std::optional<Model> model;
  std::optional<std::size_t> sigma;
  std::optional<double> f;
  std::optional<double> horizon;
  std::optional<std::size_t> sweep_trials;
  bool have_n_u = false, have_n_s = false, have_n_c = false, have_kappa = false,
       have_tau = false;

  for (const auto& [key, value] : doc.items()) {
    if (key == "model") {
      const auto name = as_string(key, value);
      if (name == "web") model = Model::web;
      else if (name == "video") model = Model::video;
      else throw ConfigError(key, "expected \"web\" or \"video\", got \"" + name + "\"");
    } else if (key == "n_u") {
      c.n_u = as_count(key, value);
      have_n_u = true;
    } else if (key == "n_s") {
      c.n_s = as_count(key, value);
      have_n_s = true;
    } else if (key == "n_c") {
      c.n_c = as_count(key, value);
      have_n_c = true;
    } else if (key == "kappa") {
      c.kappa = as_count(key, value);
      have_kappa = true;
    } else if (key == "tau") {
      c.tau = as_count(key, value);
      have_tau = true;
    } else if (key == "sigma") {
      sigma = as_count(key, value);
    } else if (key == "f") {
      f = as_real(key, value);
      if (*f < 0.0 || *f > 1.0) throw ConfigError(key, "must lie in [0, 1]");
    } else if (key == "alpha") {
      c.alpha = as_real(key, value);
      if (c.alpha < 0.0) throw ConfigError(key, "must be >= 0");
    } else if (key == "lambda") {
      c.lambda = as_real(key, value);
      if (c.lambda <= 0.0) throw ConfigError(key, "must be > 0");
    } else if (key == "horizon") {
      horizon = as_real(key, value);
      if (*horizon < 0.0) throw ConfigError(key, "must be >= 0");
    } else if (key == "seed") {
      c.seed = as_uint(key, value);
    } else if (key == "sample_interval") {
      c.sample_interval = as_real(key, value);
      if (c.sample_interval <= 0.0) throw ConfigError(key, "must be > 0");
    } else if (key == "trials") {
      spec.trials = as_count(key, value);
    } else if (key == "measure_at") {
      spec.measure_at = as_real(key, value);
      if (*spec.measure_at < 0.0) throw ConfigError(key, "must be >= 0");
    } else if (key == "output") {
      spec.output = as_string(key, value);
      if (spec.output.empty()) throw ConfigError(key, "must not be empty");
    } else if (key == "sweep") {
      spec.sweep = parse_sweep(value, sweep_trials);
    } else {
      throw ConfigError(key, "unknown key");
    }
  }

  require(model.has_value(), "model");
  spec.model = *model;
  require(have_n_u, "n_u");
  require(have_n_s, "n_s");
  require(have_n_c, "n_c");
  require(have_kappa, "kappa");
  if (spec.model == Model::web) require(have_tau, "tau");
  if (sigma && f) throw ConfigError("f", "mutually exclusive with sigma");
  if (!sigma && !f) throw ConfigError("sigma", "required (or f for a mixed spread)");
  c.spread = f ? SpreadPolicy::mixed(*f) : SpreadPolicy::uniform(*sigma);

  c.horizon = horizon.value_or(spec.model == Model::web ? 1000.0 : 200.0);
  if (spec.model == Model::video && std::llround(c.horizon) < 1) {
    throw ConfigError("horizon", "video runs need at least one step");
  }
  if (spec.measure_at) {
    if (spec.model != Model::web) throw ConfigError("measure_at", "only valid for the web model");
    c.horizon = *spec.measure_at;
  }
  if (sweep_trials) spec.trials = *sweep_trials;

  c.validate();
  if (spec.sweep) {
    for (double v : spec.sweep->values) apply_axis(c, spec.sweep->axis, v);
  }
  return spec;
}

ExperimentSpec load_spec(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path, "cannot open spec file");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_spec(text.str());
}

std::string format_fixed(double value) {
  if (value == 0.0) value = 0.0;  // no "-0.000000"
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", value);
  return buf;
}

namespace {

std::string format_optional(const std::optional<double>& value) {
  return value ? format_fixed(*value) : std::string();
}

std::filesystem::path prepare_output(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError(dir, "cannot create output directory: " + ec.message());
  return dir;
}

template <class Writer>
void write_file(const std::filesystem::path& path, Writer&& writer) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(path.string(), "cannot open for writing");
  writer(out);
  out.flush();
  if (!out) throw IoError(path.string(), "write failed");
}

SpreadOrderStats averaged_order_stats(const SweepPoint& point) {
  SpreadOrderStats sum;
  for (const auto& o : point.outcomes) {
    const auto s = spread_order_stats(o.final_user_rates);
    sum.min += s.min;
    sum.p1 += s.p1;
    sum.p5 += s.p5;
    sum.p50 += s.p50;
  }
  const auto n = static_cast<double>(point.outcomes.size());
  return {sum.min / n, sum.p1 / n, sum.p5 / n, sum.p50 / n};
}

}  // namespace

void write_trace_csv(std::ostream& out, std::span<const TraceSample> trace) {
  out << "time,undecided_fraction,minmax_metric\n";
  for (const auto& s : trace) {
    out << format_fixed(s.time) << ',' << format_fixed(s.undecided_fraction) << ','
        << format_fixed(s.minmax_metric) << '\n';
  }
}

void write_outcome_csv(std::ostream& out, const TrialOutcome& outcome, std::uint64_t seed) {
  out << "status,convergence_time,seed\n";
  out << to_string(outcome.status) << ',' << format_optional(outcome.convergence_time) << ','
      << seed << '\n';
}

void write_sweep_csv(std::ostream& out, const SweepResult& result) {
  out << "axis_value,trials,converged_optimal,converged_nonoptimal,timeout,failure_rate,"
         "mean_convergence_time,median_convergence_time\n";
  for (const auto& p : result.points) {
    out << format_fixed(p.axis_value) << ',' << p.trials << ',' << p.converged_optimal << ','
        << p.converged_nonoptimal << ',' << p.timeout << ',' << format_fixed(p.failure_rate)
        << ',' << format_optional(p.mean_convergence_time) << ','
        << format_optional(p.median_convergence_time) << '\n';
  }
}

void write_order_stats_csv(std::ostream& out, const SweepResult& result) {
  out << "axis_value,trials,min,p1,p5,p50\n";
  for (const auto& p : result.points) {
    const auto s = averaged_order_stats(p);
    out << format_fixed(p.axis_value) << ',' << p.outcomes.size() << ','
        << format_fixed(s.min) << ',' << format_fixed(s.p1) << ',' << format_fixed(s.p5)
        << ',' << format_fixed(s.p50) << '\n';
  }
}

TrialOutcome cmd_run(const ExperimentSpec& spec, std::ostream& log) {
  const bool measuring = spec.measure_at.has_value();
  const TrialOutcome outcome = spec.model == Model::web
                                   ? run_web_trial(spec.config, 0, !measuring)
                                   : run_video_trial(spec.config, 0);

  const auto dir = prepare_output(spec.output);
  write_file(dir / "trace.csv", [&](std::ostream& o) { write_trace_csv(o, outcome.trace); });
  write_file(dir / "outcome.csv",
             [&](std::ostream& o) { write_outcome_csv(o, outcome, spec.config.seed); });
  if (measuring) {
    const auto s = spread_order_stats(outcome.final_user_rates);
    write_file(dir / "order_stats.csv", [&](std::ostream& o) {
      o << "time,min,p1,p5,p50\n"
        << format_fixed(*spec.measure_at) << ',' << format_fixed(s.min) << ','
        << format_fixed(s.p1) << ',' << format_fixed(s.p5) << ',' << format_fixed(s.p50)
        << '\n';
    });
  }
  log << to_string(spec.model) << ": " << to_string(outcome.status);
  if (outcome.convergence_time) log << " at " << format_fixed(*outcome.convergence_time);
  log << " -> " << dir.string() << '\n';
  return outcome;
}

SweepResult cmd_sweep(const ExperimentSpec& spec, std::size_t jobs, std::ostream& log) {
  if (!spec.sweep) throw ConfigError("sweep", "required for the sweep command");
  RunOptions options;
  options.jobs = jobs;
  options.stop_on_convergence = !spec.measure_at.has_value();
  options.keep_outcomes = spec.measure_at.has_value();

  SweepResult result;
  result.axis = spec.sweep->axis;
  for (double value : spec.sweep->values) {
    const SimConfig config = apply_axis(spec.config, spec.sweep->axis, value);
    SweepPoint point = run_trials(config, spec.trials, spec.model, options);
    point.axis_value = value;
    log << to_string(spec.sweep->axis) << '=' << format_fixed(value) << ": "
        << point.converged_optimal << " optimal, " << point.converged_nonoptimal
        << " non-optimal, " << point.timeout << " timeout\n";
    result.points.push_back(std::move(point));
  }

  const auto dir = prepare_output(spec.output);
  write_file(dir / "sweep.csv", [&](std::ostream& o) { write_sweep_csv(o, result); });
  if (spec.measure_at) {
    write_file(dir / "order_stats.csv",
               [&](std::ostream& o) { write_order_stats_csv(o, result); });
  }
  return result;
}

bool cmd_validate(std::ostream& report, std::uint64_t seed) {
  bool ok = true;
  for (const auto& check : run_validators(seed)) {
    report << (check.passed ? "PASS " : "FAIL ") << check.name << ": " << check.detail << '\n';
    ok = ok && check.passed;
  }
  return ok;
}

}  // namespace gwtw
