// Experiment configuration: JSON file plus command-line overrides.
#pragma once

#include "rmtlab/exact.hpp"

#include "json.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace rmtlab::experiment {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Mode { trace_clt, lambda1_clt, concentration, verify_combinatorics, verify_encoding, verify_oracles };

std::string to_string(Mode mode);
Mode parse_mode(const std::string& text);
inline bool is_monte_carlo(Mode mode) {
  return mode == Mode::trace_clt || mode == Mode::lambda1_clt || mode == Mode::concentration;
}

struct PSpec {
  enum class Kind { explicit_value, power };
  Kind kind = Kind::explicit_value;
  std::string value;    // explicit: "NUM/DEN", decimal, or float literal
  double epsilon = 0.0; // power: p = n^{epsilon - 1}
};

/// Optional gates; run_experiment exits with code 3 when any configured gate fails.
struct AcceptanceThresholds {
  std::optional<double> ks_max;
  std::optional<double> variance_min, variance_max;
  std::optional<double> mean_abs_max;
  std::optional<double> fourth_min, fourth_max;
  std::optional<double> trace_variance_ratio_min, trace_variance_ratio_max;
  bool require_window = false;
  bool require_tail = false;

  bool any() const;
};

struct ExperimentConfig {
  Mode mode = Mode::trace_clt;
  int n = 0;
  PSpec p_spec;
  double p = 0.0;                    // resolved
  std::optional<Rational> p_exact;   // when the explicit value is a fraction or decimal
  int m = 3;
  long replicates = 0;
  std::uint64_t master_seed = 0;
  bool loops = true;
  int threads = 0;                   // 0 = auto
  std::filesystem::path output_dir = "out";
  bool allow_p_above_half = false;
  std::vector<double> tail_t{1.0};
  int histogram_bins = 20;
  int q = 8;                         // verify-encoding walk length / verify-oracles max power
  AcceptanceThresholds acceptance;
};

/// Parses and validates a merged JSON document (file contents with flag
/// overrides already applied). Messages name the offending field.
ExperimentConfig parse_config(const nlohmann::json& doc);

/// Reads a JSON config file; ConfigError on I/O or syntax errors.
nlohmann::json load_config_file(const std::filesystem::path& path);

/// Fields that determine replicate contents (excludes threads and output_dir),
/// so resumed runs can be matched against the run that produced a directory.
nlohmann::json identity_json(const ExperimentConfig& cfg);

/// Full resolved config as JSON, including the resolved p echoed to 12 digits.
nlohmann::json to_json(const ExperimentConfig& cfg);

/// p to 12 significant digits.
std::string echo_probability(double p);

/// RMTLAB_THREADS, then the configured value, then hardware concurrency.
int resolve_threads(int configured);

}  // namespace rmtlab::experiment
