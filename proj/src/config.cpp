#include "rmtlab/config.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <thread>

namespace rmtlab::experiment {

using nlohmann::json;

std::string to_string(Mode mode) {
  switch (mode) {
    case Mode::trace_clt: return "trace-clt";
    case Mode::lambda1_clt: return "lambda1-clt";
    case Mode::concentration: return "concentration";
    case Mode::verify_combinatorics: return "verify-combinatorics";
    case Mode::verify_encoding: return "verify-encoding";
    case Mode::verify_oracles: return "verify-oracles";
  }
  return "?";
}

Mode parse_mode(const std::string& text) {
  for (Mode m : {Mode::trace_clt, Mode::lambda1_clt, Mode::concentration, Mode::verify_combinatorics,
                 Mode::verify_encoding, Mode::verify_oracles})
    if (to_string(m) == text) return m;
  throw ConfigError("config field 'mode': unknown mode '" + text + "'");
}

bool AcceptanceThresholds::any() const {
  return ks_max || variance_min || variance_max || mean_abs_max || fourth_min || fourth_max ||
         trace_variance_ratio_min || trace_variance_ratio_max || require_window || require_tail;
}

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& message) {
  throw ConfigError("config field '" + field + "': " + message);
}

template <typename T>
T get(const json& doc, const std::string& field) {
  try {
    return doc.at(field).get<T>();
  } catch (const json::out_of_range&) {
    fail(field, "missing");
  } catch (const json::type_error& e) {
    fail(field, std::string("wrong type (") + e.what() + ")");
  }
}

template <typename T>
T get_or(const json& doc, const std::string& field, T fallback) {
  if (!doc.contains(field) || doc.at(field).is_null()) return fallback;
  return get<T>(doc, field);
}

std::optional<double> optional_number(const json& doc, const std::string& field) {
  if (!doc.contains(field) || doc.at(field).is_null()) return std::nullopt;
  if (!doc.at(field).is_number()) fail("acceptance." + field, "must be a number");
  return doc.at(field).get<double>();
}

void resolve_probability(ExperimentConfig& cfg, const json& spec) {
  if (!spec.is_object()) fail("p_spec", "must be an object with a 'kind'");
  const auto kind = get<std::string>(spec, "kind");
  if (kind == "explicit") {
    cfg.p_spec.kind = PSpec::Kind::explicit_value;
    const json& value = spec.contains("value") ? spec.at("value") : json();
    if (value.is_string()) {
      cfg.p_spec.value = value.get<std::string>();
      try {
        cfg.p_exact = parse_rational(cfg.p_spec.value);
        cfg.p = to_double(*cfg.p_exact);
      } catch (const std::invalid_argument&) {
        char* end = nullptr;
        cfg.p = std::strtod(cfg.p_spec.value.c_str(), &end);
        if (end == cfg.p_spec.value.c_str() || *end != '\0') fail("p_spec.value", "not a fraction or number");
      }
    } else if (value.is_number()) {
      cfg.p = value.get<double>();
      cfg.p_spec.value = value.dump();
    } else {
      fail("p_spec.value", "missing or not a string/number");
    }
  } else if (kind == "power") {
    cfg.p_spec.kind = PSpec::Kind::power;
    if (!spec.contains("epsilon") || !spec.at("epsilon").is_number()) fail("p_spec.epsilon", "missing or not a number");
    cfg.p_spec.epsilon = spec.at("epsilon").get<double>();
    if (!(cfg.p_spec.epsilon > 0.0 && cfg.p_spec.epsilon <= 1.0)) fail("p_spec.epsilon", "must lie in (0, 1]");
    cfg.p = std::pow(static_cast<double>(cfg.n), cfg.p_spec.epsilon - 1.0);
  } else {
    fail("p_spec.kind", "expected 'explicit' or 'power', got '" + kind + "'");
  }
  if (!(cfg.p > 0.0 && cfg.p <= 1.0)) fail("p_spec", "resolved p = " + echo_probability(cfg.p) + " outside (0, 1]");
  if (cfg.p > 0.5 && !cfg.allow_p_above_half)
    fail("p_spec", "resolved p = " + echo_probability(cfg.p) +
                       " exceeds 1/2; set allow_p_above_half to run outside the theorem regime");
}

}  // namespace

ExperimentConfig parse_config(const json& doc) {
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  ExperimentConfig cfg;
  cfg.mode = parse_mode(get<std::string>(doc, "mode"));
  cfg.threads = get_or<int>(doc, "threads", 0);
  if (cfg.threads < 0) fail("threads", "must be >= 0 (0 = auto)");
  cfg.output_dir = get_or<std::string>(doc, "output_dir", "out");
  cfg.loops = get_or<bool>(doc, "loops", true);
  cfg.q = get_or<int>(doc, "q", 8);

  if (!is_monte_carlo(cfg.mode)) {
    cfg.n = get_or<int>(doc, "n", 4);
    if (cfg.n < 1) fail("n", "must be >= 1");
    if (cfg.q < 1) fail("q", "must be >= 1");
    if (doc.contains("p_spec")) {
      cfg.allow_p_above_half = true;
      resolve_probability(cfg, doc.at("p_spec"));
    }
    return cfg;
  }

  cfg.n = get<int>(doc, "n");
  if (cfg.n < 2) fail("n", "must be >= 2");
  cfg.m = get_or<int>(doc, "m", 3);
  if (cfg.m < 1) fail("m", "must be >= 1");
  cfg.replicates = get<long>(doc, "replicates");
  if (cfg.replicates < 2) fail("replicates", "must be >= 2 (sample variance undefined otherwise)");
  if (!doc.contains("master_seed") || !doc.at("master_seed").is_number_integer())
    fail("master_seed", "missing or not an unsigned integer");
  {
    const json& seed = doc.at("master_seed");
    if (!seed.is_number_unsigned() && seed.get<std::int64_t>() < 0) fail("master_seed", "must be nonnegative");
    cfg.master_seed = seed.get<std::uint64_t>();
  }
  cfg.allow_p_above_half = get_or<bool>(doc, "allow_p_above_half", false);
  if (!doc.contains("p_spec")) fail("p_spec", "missing");
  resolve_probability(cfg, doc.at("p_spec"));

  if (doc.contains("tail_t")) {
    cfg.tail_t = get<std::vector<double>>(doc, "tail_t");
    for (double t : cfg.tail_t)
      if (!(t > 0.0)) fail("tail_t", "thresholds must be positive");
  }
  cfg.histogram_bins = get_or<int>(doc, "histogram_bins", 20);
  if (cfg.histogram_bins < 4) fail("histogram_bins", "must be >= 4");

  if (doc.contains("acceptance")) {
    const json& acc = doc.at("acceptance");
    if (!acc.is_object()) fail("acceptance", "must be an object");
    auto& a = cfg.acceptance;
    a.ks_max = optional_number(acc, "ks_max");
    a.variance_min = optional_number(acc, "variance_min");
    a.variance_max = optional_number(acc, "variance_max");
    a.mean_abs_max = optional_number(acc, "mean_abs_max");
    a.fourth_min = optional_number(acc, "fourth_min");
    a.fourth_max = optional_number(acc, "fourth_max");
    a.trace_variance_ratio_min = optional_number(acc, "trace_variance_ratio_min");
    a.trace_variance_ratio_max = optional_number(acc, "trace_variance_ratio_max");
    a.require_window = get_or<bool>(acc, "require_window", false);
    a.require_tail = get_or<bool>(acc, "require_tail", false);
  }
  return cfg;
}

json load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("invalid JSON in " + path.string() + ": " + e.what());
  }
}

std::string echo_probability(double p) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", p);
  return buf;
}

json identity_json(const ExperimentConfig& cfg) {
  json spec;
  if (cfg.p_spec.kind == PSpec::Kind::power)
    spec = {{"kind", "power"}, {"epsilon", cfg.p_spec.epsilon}};
  else
    spec = {{"kind", "explicit"}, {"value", cfg.p_spec.value}};
  return {{"mode", to_string(cfg.mode)}, {"n", cfg.n},           {"p_spec", spec},
          {"m", cfg.m},                  {"replicates", cfg.replicates}, {"master_seed", cfg.master_seed},
          {"loops", cfg.loops}};
}

json to_json(const ExperimentConfig& cfg) {
  json out = identity_json(cfg);
  out["p"] = cfg.p;
  out["p_echo"] = echo_probability(cfg.p);
  out["p_fraction"] = cfg.p_exact ? json(rmtlab::to_string(*cfg.p_exact)) : json();
  out["allow_p_above_half"] = cfg.allow_p_above_half;
  out["tail_t"] = cfg.tail_t;
  out["histogram_bins"] = cfg.histogram_bins;
  json acc = json::object();
  const auto& a = cfg.acceptance;
  auto put = [&](const char* key, const std::optional<double>& v) {
    if (v) acc[key] = *v;
  };
  put("ks_max", a.ks_max);
  put("variance_min", a.variance_min);
  put("variance_max", a.variance_max);
  put("mean_abs_max", a.mean_abs_max);
  put("fourth_min", a.fourth_min);
  put("fourth_max", a.fourth_max);
  put("trace_variance_ratio_min", a.trace_variance_ratio_min);
  put("trace_variance_ratio_max", a.trace_variance_ratio_max);
  if (a.require_window) acc["require_window"] = true;
  if (a.require_tail) acc["require_tail"] = true;
  out["acceptance"] = acc;
  return out;
}

int resolve_threads(int configured) {
  if (const char* env = std::getenv("RMTLAB_THREADS"); env && *env) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (*end != '\0' || v < 0) throw ConfigError("RMTLAB_THREADS must be a nonnegative integer");
    configured = static_cast<int>(v);
  }
  if (configured > 0) return configured;
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace rmtlab::experiment
