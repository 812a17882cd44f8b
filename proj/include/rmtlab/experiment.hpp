// Monte Carlo orchestration: replicate sampling, incremental CSV
// persistence, summary statistics and acceptance gating.
#pragma once

#include "rmtlab/config.hpp"
#include "rmtlab/exact.hpp"
#include "rmtlab/rng.hpp"

#include "json.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace rmtlab::experiment {

enum ExitCode : int { kSuccess = 0, kConfigError = 2, kAcceptanceFailure = 3, kRuntimeFailure = 4 };

enum class Lambda1Status { not_computed, ok, nonconverged };

struct ReplicateRecord {
  long replicate_index = 0;
  StreamSeed seed;
  std::optional<BigInt> trace;
  double lambda1 = 0.0;
  Lambda1Status lambda1_status = Lambda1Status::not_computed;
};

inline constexpr const char* kReplicatesHeader = "replicate_index,master_seed,trace_int,lambda1,lambda1_status";

/// Computes one replicate: samples G(n, p) from StreamSeed(master_seed, index),
/// then the trace and/or λ1 required by the mode.
ReplicateRecord compute_replicate(const ExperimentConfig& cfg, long index);

/// One CSV line (no newline). Fields are RFC-4180 quoted when needed.
std::string format_record(const ReplicateRecord& record);
/// Inverse of format_record; throws std::invalid_argument on malformed input.
ReplicateRecord parse_record(const std::string& line);

/// Reads replicates.csv, keeping the longest prefix of complete records with
/// indices 0, 1, 2, ... Also returns the byte length of that prefix.
std::vector<ReplicateRecord> read_replicates(const std::filesystem::path& path, std::uintmax_t* valid_bytes = nullptr);

/// Summary statistics for the records of a finished run.
nlohmann::json summarize(const ExperimentConfig& cfg, const std::vector<ReplicateRecord>& records);

/// Names of configured acceptance gates that the summary violates.
std::vector<std::string> acceptance_failures(const ExperimentConfig& cfg, const nlohmann::json& summary);

/// Throws std::invalid_argument naming the first schema violation.
void validate_summary(const nlohmann::json& summary);

struct RunOptions {
  bool fresh = false;          // discard an existing run in output_dir
  std::ostream* log = nullptr; // progress messages
  long stop_after = -1;        // stop once this many records exist (simulates interruption)
};

struct RunOutcome {
  int exit_code = kSuccess;
  nlohmann::json summary;
  long resumed_from = 0;
  bool completed = false;
};

/// Runs or resumes a Monte Carlo experiment, writing config.json,
/// replicates.csv, summary.json, histogram.csv and histogram.svg into
/// cfg.output_dir. Replicates are computed on a worker pool and appended in
/// index order by this thread. Verify-* modes run their suite with defaults
/// derived from the config and write nothing.
RunOutcome run_experiment(const ExperimentConfig& cfg, const RunOptions& options = {});

/// Recomputes the summary from a finished run directory.
nlohmann::json report(const std::filesystem::path& dir);

}  // namespace rmtlab::experiment
