// rmtlab: verification suites and Monte Carlo runs for sparse G(n, p)
// spectral CLTs.
#include "rmtlab/config.hpp"
#include "rmtlab/exact.hpp"
#include "rmtlab/experiment.hpp"
#include "rmtlab/verification.hpp"

#include "CLI11.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>

namespace ex = rmtlab::experiment;
using nlohmann::json;

namespace {

struct RunFlags {
  std::string config_file;
  std::optional<int> n, m, threads, bins;
  std::optional<long> replicates;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> p;
  std::optional<double> epsilon;
  std::optional<std::string> out;
  std::vector<double> tail_t;
  bool simple_graph = false;
  bool loops_flag = false;
  bool allow_dense = false;
  bool fresh = false;
};

// Flags override the file field by field.
json merged_config(const std::string& mode, const RunFlags& f) {
  json doc = f.config_file.empty() ? json::object() : ex::load_config_file(f.config_file);
  doc["mode"] = mode;
  if (f.n) doc["n"] = *f.n;
  if (f.m) doc["m"] = *f.m;
  if (f.replicates) doc["replicates"] = *f.replicates;
  if (f.seed) doc["master_seed"] = *f.seed;
  if (f.threads) doc["threads"] = *f.threads;
  if (f.bins) doc["histogram_bins"] = *f.bins;
  if (f.out) doc["output_dir"] = *f.out;
  if (f.p && f.epsilon) throw ex::ConfigError("give either --p or --epsilon, not both");
  if (f.p) doc["p_spec"] = {{"kind", "explicit"}, {"value", *f.p}};
  if (f.epsilon) doc["p_spec"] = {{"kind", "power"}, {"epsilon", *f.epsilon}};
  if (!f.tail_t.empty()) doc["tail_t"] = f.tail_t;
  if (f.simple_graph) doc["loops"] = false;
  if (f.loops_flag) doc["loops"] = true;
  if (f.allow_dense) doc["allow_p_above_half"] = true;
  return doc;
}

void add_run_mode(CLI::App& run, const std::string& mode, RunFlags& flags, std::string& selected) {
  auto* sub = run.add_subcommand(mode, "Monte Carlo run: " + mode);
  sub->add_option("--config", flags.config_file, "JSON config file")->check(CLI::ExistingFile);
  sub->add_option("--n", flags.n, "matrix dimension");
  sub->add_option("--p", flags.p, "edge probability, NUM/DEN or decimal");
  sub->add_option("--epsilon", flags.epsilon, "p = n^(epsilon - 1)");
  sub->add_option("--m", flags.m, "trace power 2m (trace-clt) or tail-bound order (lambda1 modes)");
  sub->add_option("--replicates,-R", flags.replicates, "number of replicates");
  sub->add_option("--seed", flags.seed, "master seed");
  sub->add_option("--threads", flags.threads, "worker threads (0 = auto)");
  sub->add_option("--out", flags.out, "output directory");
  sub->add_option("--t", flags.tail_t, "tail thresholds for concentration checks");
  sub->add_option("--bins", flags.bins, "histogram bins");
  sub->add_flag("--simple-graph", flags.simple_graph, "exclude diagonal (loop) slots");
  sub->add_flag("--loops", flags.loops_flag, "include diagonal slots (default)");
  sub->add_flag("--allow-p-above-half", flags.allow_dense, "permit p > 1/2");
  sub->add_flag("--fresh", flags.fresh, "discard an existing run in the output directory");
  sub->callback([&selected, mode] { selected = mode; });
}

std::vector<bool> loop_settings(const std::string& text) {
  if (text == "both") return {false, true};
  if (text == "true" || text == "1" || text == "yes") return {true};
  if (text == "false" || text == "0" || text == "no") return {false};
  throw ex::ConfigError("--loops expects true, false or both");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Verification laboratory for trace and top-eigenvalue CLTs of sparse Erdos-Renyi matrices"};
  app.require_subcommand(1);

  int threads = 0;
  app.add_option("--threads", threads, "worker threads for verify-* subcommands (0 = auto)");

  auto* comb = app.add_subcommand("verify-combinatorics", "Catalan, ballot-path and convolution identities");
  int max_length = 20, max_m = 10;
  comb->add_option("--max-length", max_length, "largest m + 2n for sigma enumeration");
  comb->add_option("--max-m", max_m, "largest m for convolution identities");

  auto* enc = app.add_subcommand("verify-encoding", "exhaustive check of the marked-edge encoding lemmas");
  int enc_n = 4, enc_q = 8;
  std::string enc_loops = "both";
  bool enc_sweep = false;
  enc->add_option("--n", enc_n, "number of vertices");
  enc->add_option("--q", enc_q, "walk length");
  enc->add_option("--loops", enc_loops, "true, false or both");
  enc->add_flag("--sweep", enc_sweep, "check every n' <= n and q' <= q");

  auto* orc = app.add_subcommand("verify-oracles", "walk vs configuration oracles for E and Var of tr(M^q)");
  int orc_n = 3, orc_q = 4;
  std::string orc_p = "1/4", orc_loops = "true", orc_out;
  orc->add_option("--n", orc_n, "number of vertices");
  orc->add_option("--qmax", orc_q, "largest power");
  orc->add_option("--p", orc_p, "edge probability NUM/DEN");
  orc->add_option("--loops", orc_loops, "true or false");
  orc->add_option("--out", orc_out, "CSV output path (default stdout)");

  auto* run = app.add_subcommand("run", "Monte Carlo experiments");
  run->require_subcommand(1);
  RunFlags run_flags;
  std::string run_mode;
  for (const char* mode : {"trace-clt", "lambda1-clt", "concentration"}) add_run_mode(*run, mode, run_flags, run_mode);

  auto* rep = app.add_subcommand("report", "recompute and print the summary of a finished run");
  std::string report_dir;
  rep->add_option("dir", report_dir, "run directory")->required()->check(CLI::ExistingDirectory);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : ex::kConfigError;
  }

  try {
    const int workers = ex::resolve_threads(threads);
    if (*comb) {
      const auto v = ex::verify_combinatorics(max_length, max_m);
      ex::print(v, std::cout);
      return v.passed() ? ex::kSuccess : ex::kAcceptanceFailure;
    }
    if (*enc) {
      std::uint64_t walks = 0, violations = 0;
      const auto settings = loop_settings(enc_loops);
      std::vector<rmtlab::walks::EncodingVerification> results;
      if (enc_sweep) {
        results = ex::verify_encoding_sweep(enc_n, enc_q, settings, workers);
      } else {
        for (bool loops : settings)
          results.push_back(rmtlab::walks::verify_encoding({.n = enc_n, .q = enc_q, .loops = loops}, workers));
      }
      for (const auto& v : results) {
        ex::print(v, std::cout);
        walks += v.walks;
        violations += v.total_violations();
      }
      std::cout << "walks checked: " << walks << ", violations: " << violations << "\n";
      return violations == 0 ? ex::kSuccess : ex::kAcceptanceFailure;
    }
    if (*orc) {
      const auto settings = loop_settings(orc_loops);
      if (settings.size() != 1) throw ex::ConfigError("--loops for verify-oracles must be true or false");
      const auto v = ex::verify_oracles(orc_n, orc_q, rmtlab::parse_rational(orc_p), settings.front(), workers);
      if (orc_out.empty()) {
        ex::write_oracle_csv(v, std::cout);
      } else {
        std::ofstream out(orc_out);
        if (!out) throw std::runtime_error("cannot write " + orc_out);
        ex::write_oracle_csv(v, out);
      }
      std::cout << "crosscheck: " << (v.passed() ? "pass" : "FAIL") << "\n";
      return v.passed() ? ex::kSuccess : ex::kAcceptanceFailure;
    }
    if (*run) {
      const ex::ExperimentConfig cfg = ex::parse_config(merged_config(run_mode, run_flags));
      std::cerr << "mode=" << ex::to_string(cfg.mode) << " n=" << cfg.n << " p=" << ex::echo_probability(cfg.p)
                << " m=" << cfg.m << " R=" << cfg.replicates << " seed=" << cfg.master_seed
                << " threads=" << ex::resolve_threads(cfg.threads) << " out=" << cfg.output_dir.string() << "\n";
      const auto outcome = ex::run_experiment(cfg, {.fresh = run_flags.fresh, .log = &std::cerr});
      std::cout << outcome.summary.dump(2) << "\n";
      return outcome.exit_code;
    }
    if (*rep) {
      const json summary = ex::report(report_dir);
      ex::validate_summary(summary);
      std::cout << summary.dump(2) << "\n";
      return ex::kSuccess;
    }
  } catch (const ex::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return ex::kConfigError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid argument: " << e.what() << "\n";
    return ex::kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return ex::kRuntimeFailure;
  }
  return ex::kSuccess;
}
