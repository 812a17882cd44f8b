#include "rmtlab/experiment.hpp"

#include "rmtlab/adjacency.hpp"
#include "rmtlab/eigensolver.hpp"
#include "rmtlab/histogram.hpp"
#include "rmtlab/statistics.hpp"
#include "rmtlab/trace_power.hpp"
#include "rmtlab/verification.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <condition_variable>
#include <cstdio>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

namespace rmtlab::experiment {

using nlohmann::json;
namespace fs = std::filesystem;

ReplicateRecord compute_replicate(const ExperimentConfig& cfg, long index) {
  ReplicateRecord record;
  record.replicate_index = index;
  record.seed = {cfg.master_seed, static_cast<std::uint64_t>(index)};
  const auto a = spectral::sample_adjacency(cfg.n, cfg.p, cfg.loops, record.seed);
  if (cfg.mode == Mode::trace_clt) record.trace = spectral::trace_power_int(a, cfg.m);
  if (cfg.mode == Mode::lambda1_clt || cfg.mode == Mode::concentration) {
    try {
      record.lambda1 = spectral::lambda1(a);
      record.lambda1_status = Lambda1Status::ok;
    } catch (const spectral::ConvergenceError& e) {
      record.lambda1 = e.best_estimate();
      record.lambda1_status = Lambda1Status::nonconverged;
    }
  }
  return record;
}

namespace {

std::string csv_field(const std::string& raw) {
  if (raw.find_first_of(",\"\r\n") == std::string::npos) return raw;
  std::string out = "\"";
  for (char c : raw) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        fields.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else {
      fields.back() += c;
    }
  }
  if (quoted) throw std::invalid_argument("unterminated quote in CSV line");
  return fields;
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string status_name(Lambda1Status s) {
  switch (s) {
    case Lambda1Status::ok: return "ok";
    case Lambda1Status::nonconverged: return "nonconverged";
    default: return "";
  }
}

}  // namespace

std::string format_record(const ReplicateRecord& r) {
  std::string line = std::to_string(r.replicate_index) + "," + std::to_string(r.seed.master_seed) + ",";
  if (r.trace) line += csv_field(r.trace->str());
  line += ",";
  if (r.lambda1_status != Lambda1Status::not_computed) line += format_double(r.lambda1);
  line += "," + status_name(r.lambda1_status);
  return line;
}

ReplicateRecord parse_record(const std::string& line) {
  const auto fields = split_csv(line);
  if (fields.size() != 5) throw std::invalid_argument("replicate line needs 5 fields: " + line);
  ReplicateRecord r;
  std::size_t used = 0;
  r.replicate_index = std::stol(fields[0], &used);
  if (used != fields[0].size() || r.replicate_index < 0) throw std::invalid_argument("bad replicate_index");
  r.seed.master_seed = std::stoull(fields[1], &used);
  if (used != fields[1].size()) throw std::invalid_argument("bad master_seed");
  r.seed.replicate_index = static_cast<std::uint64_t>(r.replicate_index);
  if (!fields[2].empty()) r.trace = parse_bigint(fields[2]);
  if (fields[4] == "ok" || fields[4] == "nonconverged") {
    r.lambda1 = std::stod(fields[3], &used);
    if (used != fields[3].size()) throw std::invalid_argument("bad lambda1");
    r.lambda1_status = fields[4] == "ok" ? Lambda1Status::ok : Lambda1Status::nonconverged;
  } else if (!fields[4].empty() || !fields[3].empty()) {
    throw std::invalid_argument("bad lambda1_status '" + fields[4] + "'");
  }
  return r;
}

std::vector<ReplicateRecord> read_replicates(const fs::path& path, std::uintmax_t* valid_bytes) {
  std::vector<ReplicateRecord> records;
  if (valid_bytes) *valid_bytes = 0;
  std::ifstream in(path, std::ios::binary);
  if (!in) return records;
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();

  std::size_t pos = text.find('\n');
  if (pos == std::string::npos || text.substr(0, pos) != kReplicatesHeader) return records;
  std::size_t good = pos + 1;
  while (true) {
    const std::size_t end = text.find('\n', good);
    if (end == std::string::npos) break;  // partial trailing line
    try {
      ReplicateRecord r = parse_record(text.substr(good, end - good));
      if (r.replicate_index != static_cast<long>(records.size())) break;
      records.push_back(std::move(r));
    } catch (const std::exception&) {
      break;
    }
    good = end + 1;
  }
  if (valid_bytes) *valid_bytes = good;
  return records;
}

namespace {

struct Analysis {
  json summary;
  std::vector<double> normalized;
  long nonconverged = 0;
};

json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(); }

Analysis analyze(const ExperimentConfig& cfg, const std::vector<ReplicateRecord>& records) {
  Analysis out;
  json& s = out.summary;
  s["schema"] = "rmtlab-summary/1";
  s["mode"] = to_string(cfg.mode);
  s["n"] = cfg.n;
  s["p"] = cfg.p;
  s["p_echo"] = echo_probability(cfg.p);
  s["p_fraction"] = cfg.p_exact ? json(rmtlab::to_string(*cfg.p_exact)) : json();
  s["m"] = cfg.m;
  s["replicates"] = static_cast<long>(records.size());
  s["master_seed"] = cfg.master_seed;
  s["loops"] = cfg.loops;
  s["tail_checks"] = json::array();
  s["window_ok"] = json();

  stats::NormalizedSample sample;
  if (cfg.mode == Mode::trace_clt) {
    std::vector<BigInt> traces;
    traces.reserve(records.size());
    for (const auto& r : records) {
      if (!r.trace) throw std::runtime_error("replicate " + std::to_string(r.replicate_index) + " has no trace");
      traces.push_back(*r.trace);
    }
    sample = stats::normalize_traces(traces, cfg.n, cfg.p, cfg.m);
    const double var = stats::trace_sample_variance(traces);
    const double leading = stats::trace_variance_leading_term(cfg.n, cfg.p, cfg.m);
    s["trace_mean"] = sample.center;
    s["trace_variance"] = var;
    s["trace_variance_leading"] = leading;
    s["trace_variance_ratio"] = var / leading;
  } else {
    std::vector<double> values;
    for (const auto& r : records) {
      if (r.lambda1_status == Lambda1Status::ok)
        values.push_back(r.lambda1);
      else
        ++out.nonconverged;
    }
    sample = stats::normalize_lambda1(values, cfg.p);
    s["lambda1_mean"] = sample.center;
    const double np = cfg.n * cfg.p;
    s["window"] = {np - 3.0, np + 2.0};
    s["window_ok"] = np >= 30.0 ? json(stats::expectation_window_check(sample.center, cfg.n, cfg.p)) : json();
    for (double t : cfg.tail_t) {
      const auto tc = stats::tail_check(values, cfg.n, cfg.p, cfg.m, t);
      s["tail_checks"].push_back(
          {{"m", tc.m}, {"t", tc.t}, {"bound", tc.bound}, {"freq", tc.empirical_frequency}, {"ok", tc.within_bound()}});
    }
  }
  s["nonconverged"] = out.nonconverged;
  s["degenerate"] = sample.degenerate;
  s["scale"] = sample.scale_used;
  const auto moments = stats::summary_moments(sample.values);
  s["ks"] = stats::ks_distance(sample.values);
  s["mean"] = number_or_null(moments.mean);
  s["variance"] = number_or_null(moments.variance);
  s["third"] = number_or_null(moments.third);
  s["fourth"] = number_or_null(moments.fourth);
  out.normalized = std::move(sample.values);
  return out;
}

json acceptance_block(const ExperimentConfig& cfg, const json& summary) {
  const auto failures = acceptance_failures(cfg, summary);
  return {{"configured", cfg.acceptance.any()}, {"passed", failures.empty()}, {"failures", failures}};
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

int run_verification(const ExperimentConfig& cfg, std::ostream* log) {
  std::ostringstream sink;
  std::ostream& out = log ? *log : sink;
  const int threads = resolve_threads(cfg.threads);
  switch (cfg.mode) {
    case Mode::verify_combinatorics: {
      const auto v = verify_combinatorics();
      print(v, out);
      return v.passed() ? kSuccess : kAcceptanceFailure;
    }
    case Mode::verify_encoding: {
      std::uint64_t violations = 0;
      for (const auto& v : verify_encoding_sweep(cfg.n, cfg.q, {false, true}, threads)) {
        print(v, out);
        violations += v.total_violations();
      }
      return violations == 0 ? kSuccess : kAcceptanceFailure;
    }
    case Mode::verify_oracles: {
      const Rational p = cfg.p_exact.value_or(Rational(1, 4));
      const auto v = verify_oracles(cfg.n, cfg.q, p, cfg.loops, threads);
      write_oracle_csv(v, out);
      out << "crosscheck: " << (v.passed() ? "pass" : "FAIL") << "\n";
      return v.passed() ? kSuccess : kAcceptanceFailure;
    }
    default: return kConfigError;
  }
}

}  // namespace

json summarize(const ExperimentConfig& cfg, const std::vector<ReplicateRecord>& records) {
  return analyze(cfg, records).summary;
}

std::vector<std::string> acceptance_failures(const ExperimentConfig& cfg, const json& s) {
  std::vector<std::string> failures;
  const auto& a = cfg.acceptance;
  auto value = [&](const char* key) {
    return s.contains(key) && s.at(key).is_number() ? s.at(key).get<double>() : std::nan("");
  };
  auto check = [&](bool ok, const std::string& name) {
    if (!ok) failures.push_back(name);
  };
  if (a.ks_max) check(value("ks") <= *a.ks_max, "ks_max");
  if (a.variance_min) check(value("variance") >= *a.variance_min, "variance_min");
  if (a.variance_max) check(value("variance") <= *a.variance_max, "variance_max");
  if (a.mean_abs_max) check(std::fabs(value("mean")) <= *a.mean_abs_max, "mean_abs_max");
  if (a.fourth_min) check(value("fourth") >= *a.fourth_min, "fourth_min");
  if (a.fourth_max) check(value("fourth") <= *a.fourth_max, "fourth_max");
  if (a.trace_variance_ratio_min)
    check(value("trace_variance_ratio") >= *a.trace_variance_ratio_min, "trace_variance_ratio_min");
  if (a.trace_variance_ratio_max)
    check(value("trace_variance_ratio") <= *a.trace_variance_ratio_max, "trace_variance_ratio_max");
  if (a.require_window) check(s.value("window_ok", json()).is_boolean() && s.at("window_ok").get<bool>(), "window");
  if (a.require_tail) {
    bool ok = !s.at("tail_checks").empty();
    for (const auto& tc : s.at("tail_checks")) ok = ok && tc.at("ok").get<bool>();
    check(ok, "tail");
  }
  return failures;
}

void validate_summary(const json& s) {
  auto require = [&](bool ok, const std::string& what) {
    if (!ok) throw std::invalid_argument("summary.json: " + what);
  };
  require(s.is_object(), "not an object");
  for (const char* key : {"ks", "mean", "variance", "third", "fourth"})
    require(s.contains(key) && (s.at(key).is_number() || s.at(key).is_null()), std::string("field '") + key + "' must be a number");
  require(s.at("ks").is_number(), "field 'ks' must be a number");
  require(s.contains("tail_checks") && s.at("tail_checks").is_array(), "field 'tail_checks' must be an array");
  for (const auto& tc : s.at("tail_checks")) {
    require(tc.is_object(), "tail_checks entries must be objects");
    require(tc.contains("m") && tc.at("m").is_number_integer(), "tail_checks[].m must be an integer");
    for (const char* key : {"t", "bound", "freq"})
      require(tc.contains(key) && tc.at(key).is_number(), std::string("tail_checks[].") + key + " must be a number");
  }
  require(s.contains("window_ok") && (s.at("window_ok").is_boolean() || s.at("window_ok").is_null()),
          "field 'window_ok' must be boolean or null");
}

RunOutcome run_experiment(const ExperimentConfig& cfg, const RunOptions& options) {
  RunOutcome outcome;
  if (!is_monte_carlo(cfg.mode)) {
    outcome.exit_code = run_verification(cfg, options.log);
    outcome.completed = true;
    return outcome;
  }

  const fs::path dir = cfg.output_dir;
  fs::create_directories(dir);
  const fs::path config_path = dir / "config.json";
  const fs::path csv_path = dir / "replicates.csv";
  if (options.fresh)
    for (const char* name : {"config.json", "replicates.csv", "summary.json", "histogram.csv", "histogram.svg"})
      fs::remove(dir / name);

  const json identity = identity_json(cfg);
  if (fs::exists(config_path)) {
    const json existing = load_config_file(config_path);
    if (!existing.contains("identity") || existing.at("identity") != identity)
      throw ConfigError("output directory " + dir.string() +
                        " holds a run with a different configuration; pass --fresh to replace it");
  }
  write_text(config_path, json{{"identity", identity}, {"resolved", to_json(cfg)}}.dump(2) + "\n");

  std::uintmax_t valid = 0;
  std::vector<ReplicateRecord> records = read_replicates(csv_path, &valid);
  if (static_cast<long>(records.size()) > cfg.replicates) records.resize(static_cast<std::size_t>(cfg.replicates));
  if (fs::exists(csv_path) && valid > 0) {
    fs::resize_file(csv_path, valid);
  } else {
    write_text(csv_path, std::string(kReplicatesHeader) + "\n");
    records.clear();
  }
  outcome.resumed_from = static_cast<long>(records.size());

  const long target = options.stop_after >= 0 ? std::min(cfg.replicates, options.stop_after) : cfg.replicates;
  if (options.log && outcome.resumed_from > 0)
    *options.log << "resuming at replicate " << outcome.resumed_from << "\n";

  std::ofstream csv(csv_path, std::ios::binary | std::ios::app);
  if (!csv) throw std::runtime_error("cannot append to " + csv_path.string());

  std::mutex guard;
  std::condition_variable ready;
  std::map<long, ReplicateRecord> pending;
  std::exception_ptr failure;
  std::atomic<long> cursor{static_cast<long>(records.size())};
  std::atomic<bool> abort{false};

  auto worker = [&] {
    while (!abort) {
      const long index = cursor++;
      if (index >= target) break;
      try {
        ReplicateRecord record = compute_replicate(cfg, index);
        std::lock_guard lock(guard);
        pending.emplace(index, std::move(record));
      } catch (...) {
        std::lock_guard lock(guard);
        if (!failure) failure = std::current_exception();
        abort = true;
      }
      ready.notify_one();
    }
  };

  {
    std::vector<std::jthread> pool;
    const int threads = resolve_threads(cfg.threads);
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);

    long next = static_cast<long>(records.size());
    const long step = std::max(1L, cfg.replicates / 10);
    while (next < target) {
      std::unique_lock lock(guard);
      ready.wait(lock, [&] { return failure || pending.count(next) > 0; });
      if (failure) break;
      ReplicateRecord record = std::move(pending.at(next));
      pending.erase(next);
      lock.unlock();
      csv << format_record(record) << '\n';
      csv.flush();
      if (!csv) {
        abort = true;
        throw std::runtime_error("write failed: " + csv_path.string());
      }
      records.push_back(std::move(record));
      ++next;
      if (options.log && next % step == 0) *options.log << "  " << next << "/" << cfg.replicates << " replicates\n";
    }
  }
  if (failure) std::rethrow_exception(failure);
  csv.close();

  if (static_cast<long>(records.size()) < cfg.replicates) return outcome;
  outcome.completed = true;

  Analysis analysis = analyze(cfg, records);
  analysis.summary["acceptance"] = acceptance_block(cfg, analysis.summary);
  write_text(dir / "summary.json", analysis.summary.dump(2) + "\n");
  emit_histogram(analysis.normalized, cfg.histogram_bins, dir);
  outcome.summary = analysis.summary;

  // Non-converged λ1 values are excluded; more than 0.1% of them fails the run.
  if (static_cast<double>(analysis.nonconverged) >= 0.001 * static_cast<double>(cfg.replicates))
    outcome.exit_code = kRuntimeFailure;
  else if (!analysis.summary["acceptance"]["passed"].get<bool>())
    outcome.exit_code = kAcceptanceFailure;
  return outcome;
}

json report(const fs::path& dir) {
  const json stored = load_config_file(dir / "config.json");
  if (!stored.contains("resolved")) throw ConfigError(dir.string() + "/config.json lacks a 'resolved' section");
  ExperimentConfig cfg = parse_config(stored.at("resolved"));
  cfg.output_dir = dir;
  const auto records = read_replicates(dir / "replicates.csv");
  if (static_cast<long>(records.size()) != cfg.replicates)
    throw std::runtime_error("run in " + dir.string() + " is incomplete: " + std::to_string(records.size()) + "/" +
                             std::to_string(cfg.replicates) + " replicates");
  json summary = summarize(cfg, records);
  summary["acceptance"] = acceptance_block(cfg, summary);
  return summary;
}

}  // namespace rmtlab::experiment
