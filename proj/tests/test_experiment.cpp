#include "doctest.h"

#include "rmtlab/config.hpp"
#include "rmtlab/experiment.hpp"
#include "rmtlab/histogram.hpp"
#include "rmtlab/statistics.hpp"
#include "rmtlab/verification.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

using namespace rmtlab;
using namespace rmtlab::experiment;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("rmtlab_test_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json base_doc(const std::string& mode = "trace-clt") {
  return {{"mode", mode},
          {"n", 60},
          {"p_spec", {{"kind", "explicit"}, {"value", "1/5"}}},
          {"m", 2},
          {"replicates", 24},
          {"master_seed", 42}};
}

}  // namespace

TEST_CASE("config parsing") {
  const ExperimentConfig cfg = parse_config(base_doc());
  CHECK(cfg.mode == Mode::trace_clt);
  CHECK(cfg.p == doctest::Approx(0.2));
  CHECK(cfg.p_exact == Rational(1, 5));
  CHECK(cfg.loops);
  CHECK(cfg.tail_t == std::vector<double>{1.0});

  json power = base_doc();
  power["n"] = 1000;
  power["p_spec"] = {{"kind", "power"}, {"epsilon", 0.5}};
  CHECK(echo_probability(parse_config(power).p) == "0.0316227766017");
  CHECK(parse_config(power).p == doctest::Approx(0.0316228).epsilon(1e-6));

  json decimal = base_doc();
  decimal["p_spec"]["value"] = "0.12";
  CHECK(parse_config(decimal).p_exact == Rational(3, 25));

  json numeric = base_doc();
  numeric["p_spec"]["value"] = 0.25;
  CHECK(parse_config(numeric).p == 0.25);
}

TEST_CASE("config errors name the field") {
  auto expect_error = [](const json& doc, const std::string& field) {
    try {
      parse_config(doc);
      FAIL("expected ConfigError for " << field);
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find(field) != std::string::npos);
    }
  };
  json d = base_doc();
  d["p_spec"]["value"] = "0.6";
  expect_error(d, "p_spec");
  d["allow_p_above_half"] = true;
  CHECK(parse_config(d).p == doctest::Approx(0.6));

  d = base_doc();
  d["replicates"] = 1;
  expect_error(d, "replicates");
  d["replicates"] = 0;
  expect_error(d, "replicates");
  d = base_doc();
  d.erase("master_seed");
  expect_error(d, "master_seed");
  d = base_doc();
  d["mode"] = "bogus";
  expect_error(d, "mode");
  d = base_doc();
  d["p_spec"] = {{"kind", "power"}, {"epsilon", 1.5}};
  expect_error(d, "p_spec.epsilon");
  d = base_doc();
  d["p_spec"]["value"] = "abc";
  expect_error(d, "p_spec.value");
  d = base_doc();
  d["histogram_bins"] = 2;
  expect_error(d, "histogram_bins");
  d = base_doc();
  d["tail_t"] = {0.0};
  expect_error(d, "tail_t");
  CHECK_THROWS_AS(load_config_file("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("verify modes need no Monte Carlo fields") {
  const ExperimentConfig cfg = parse_config(json{{"mode", "verify-encoding"}, {"n", 3}, {"q", 5}});
  CHECK(cfg.mode == Mode::verify_encoding);
  CHECK(cfg.q == 5);
  CHECK_FALSE(is_monte_carlo(cfg.mode));
}

TEST_CASE("thread resolution") {
  ::unsetenv("RMTLAB_THREADS");
  CHECK(resolve_threads(3) == 3);
  CHECK(resolve_threads(0) >= 1);
  ::setenv("RMTLAB_THREADS", "5", 1);
  CHECK(resolve_threads(3) == 5);
  ::unsetenv("RMTLAB_THREADS");
}

TEST_CASE("identity ignores threads and output directory") {
  json a = base_doc();
  json b = base_doc();
  b["threads"] = 7;
  b["output_dir"] = "elsewhere";
  CHECK(identity_json(parse_config(a)) == identity_json(parse_config(b)));
  b["master_seed"] = 43;
  CHECK(identity_json(parse_config(a)) != identity_json(parse_config(b)));
}

TEST_CASE("replicate CSV round trip") {
  ReplicateRecord r;
  r.replicate_index = 12;
  r.seed = {.master_seed = 42, .replicate_index = 12};
  r.trace = BigInt("123456789012345678901234567890");
  r.lambda1 = 32.61803398874989;
  r.lambda1_status = Lambda1Status::ok;
  const std::string line = format_record(r);
  const ReplicateRecord back = parse_record(line);
  CHECK(back.replicate_index == 12);
  CHECK(back.seed == r.seed);
  CHECK(*back.trace == *r.trace);
  CHECK(back.lambda1 == r.lambda1);
  CHECK(back.lambda1_status == Lambda1Status::ok);
  CHECK(format_record(back) == line);

  ReplicateRecord bare;
  bare.replicate_index = 0;
  CHECK(parse_record(format_record(bare)).lambda1_status == Lambda1Status::not_computed);
  CHECK_FALSE(parse_record(format_record(bare)).trace.has_value());
  CHECK_THROWS_AS(parse_record("1,2,3"), std::invalid_argument);
  CHECK_THROWS_AS(parse_record("x,42,1,2,ok"), std::invalid_argument);
}

TEST_CASE("partial CSV keeps the longest valid prefix") {
  const fs::path dir = scratch("prefix");
  fs::create_directories(dir);
  ReplicateRecord r;
  std::string body = std::string(kReplicatesHeader) + "\n";
  for (long i = 0; i < 3; ++i) {
    r.replicate_index = i;
    r.trace = BigInt(i * 10);
    body += format_record(r) + "\n";
  }
  const std::size_t good = body.size();
  body += "3,0,3";  // torn write
  std::ofstream(dir / "replicates.csv", std::ios::binary) << body;
  std::uintmax_t valid = 0;
  const auto records = read_replicates(dir / "replicates.csv", &valid);
  CHECK(records.size() == 3);
  CHECK(valid == good);
  fs::remove_all(dir);
}

TEST_CASE("trace run, resume and determinism across thread counts") {
  json doc = base_doc();
  doc["output_dir"] = scratch("resume").string();
  doc["threads"] = 1;
  const ExperimentConfig cfg = parse_config(doc);

  RunOptions stop;
  stop.stop_after = 10;
  const RunOutcome partial = run_experiment(cfg, stop);
  CHECK_FALSE(partial.completed);
  CHECK(read_replicates(cfg.output_dir / "replicates.csv").size() == 10);

  const RunOutcome resumed = run_experiment(cfg);
  CHECK(resumed.completed);
  CHECK(resumed.resumed_from == 10);
  CHECK(resumed.exit_code == kSuccess);
  validate_summary(resumed.summary);
  const std::string resumed_csv = slurp(cfg.output_dir / "replicates.csv");

  json doc4 = doc;
  doc4["threads"] = 4;
  doc4["output_dir"] = scratch("threads4").string();
  const ExperimentConfig cfg4 = parse_config(doc4);
  const RunOutcome four = run_experiment(cfg4);
  CHECK(four.exit_code == kSuccess);
  CHECK(slurp(cfg4.output_dir / "replicates.csv") == resumed_csv);
  CHECK(four.summary["ks"] == resumed.summary["ks"]);

  for (const char* f : {"config.json", "summary.json", "histogram.csv", "histogram.svg"})
    CHECK(fs::exists(cfg.output_dir / f));
  const json reported = report(cfg.output_dir);
  CHECK(reported["variance"] == resumed.summary["variance"]);

  json other = doc;
  other["master_seed"] = 43;
  CHECK_THROWS_AS(run_experiment(parse_config(other)), ConfigError);
  RunOptions fresh;
  fresh.fresh = true;
  CHECK(run_experiment(parse_config(other), fresh).exit_code == kSuccess);

  fs::remove_all(cfg.output_dir);
  fs::remove_all(cfg4.output_dir);
}

TEST_CASE("records match direct computation") {
  json doc = base_doc("lambda1-clt");
  const ExperimentConfig cfg = parse_config(doc);
  const ReplicateRecord a = compute_replicate(cfg, 5);
  const ReplicateRecord b = compute_replicate(cfg, 5);
  CHECK(a.lambda1 == b.lambda1);
  CHECK(a.lambda1_status == Lambda1Status::ok);
  CHECK_FALSE(a.trace.has_value());
  CHECK(a.seed == StreamSeed{42, 5});
}

TEST_CASE("acceptance gates set the exit code") {
  json doc = base_doc("lambda1-clt");
  doc["output_dir"] = scratch("gate").string();
  doc["acceptance"] = {{"ks_max", 1e-9}};
  const RunOutcome out = run_experiment(parse_config(doc));
  CHECK(out.exit_code == kAcceptanceFailure);
  CHECK_FALSE(out.summary["acceptance"]["passed"].get<bool>());
  CHECK(out.summary["acceptance"]["failures"].size() == 1);

  doc["acceptance"] = {{"ks_max", 1.0}, {"variance_min", 0.0}};
  RunOptions fresh;
  fresh.fresh = true;
  CHECK(run_experiment(parse_config(doc), fresh).exit_code == kSuccess);
  fs::remove_all(doc["output_dir"].get<std::string>());
}

TEST_CASE("concentration summary carries tail checks and window") {
  json doc = base_doc("concentration");
  doc["n"] = 200;
  doc["p_spec"] = {{"kind", "explicit"}, {"value", "0.2"}};
  doc["tail_t"] = {0.5, 1.0};
  doc["output_dir"] = scratch("conc").string();
  const RunOutcome out = run_experiment(parse_config(doc));
  CHECK(out.exit_code == kSuccess);
  CHECK(out.summary["tail_checks"].size() == 2);
  CHECK(out.summary["window_ok"].get<bool>());

  doc["p_spec"]["value"] = "0.1";  // np = 20: window not meaningful
  RunOptions fresh;
  fresh.fresh = true;
  CHECK(run_experiment(parse_config(doc), fresh).summary["window_ok"].is_null());
  CHECK(out.summary["tail_checks"][1]["freq"].get<double>() == 0.0);
  fs::remove_all(doc["output_dir"].get<std::string>());
}

TEST_CASE("summary schema validation") {
  CHECK_THROWS_AS(validate_summary(json::object()), std::invalid_argument);
  CHECK_THROWS_AS(validate_summary(json{{"schema", "other"}}), std::invalid_argument);
}

TEST_CASE("histogram") {
  CHECK_THROWS_AS(build_histogram(std::vector<double>{}, 20), std::invalid_argument);
  CHECK_THROWS_AS(build_histogram(std::vector<double>{0.0}, 3), std::invalid_argument);

  const Histogram one = build_histogram(std::vector<double>{0.3}, 20);
  long nonzero = 0;
  for (long c : one.counts) nonzero += c > 0;
  CHECK(nonzero == 1);
  CHECK(one.total == 1);

  const int r = 20000;
  std::vector<double> q;
  for (int i = 1; i <= r; ++i) q.push_back(stats::normal02_quantile((i - 0.5) / r));
  const Histogram h = build_histogram(q, 20);
  CHECK(h.edges.size() == 21);
  CHECK(h.total == r);
  const double width = h.edges[1] - h.edges[0];
  for (std::size_t b = 0; b < h.counts.size(); ++b)
    CHECK(std::abs(h.counts[b] / (r * width) - h.density[b]) <= 0.02);

  const Histogram tails = build_histogram(std::vector<double>{-100, 0, 100, 100}, 8);
  CHECK(tails.underflow == 1);
  CHECK(tails.overflow == 2);
  CHECK(tails.total == 4);
}

TEST_CASE("verification suites") {
  const CombinatoricsVerification c = verify_combinatorics(12, 6);
  CHECK(c.passed());
  CHECK(c.identity_pattern_ok);
  const OracleVerification o = verify_oracles(2, 3, Rational(1, 3), true);
  CHECK(o.passed());
  std::ostringstream csv;
  write_oracle_csv(o, csv);
  CHECK(csv.str().rfind("q,kind,expectation,variance,walk_expectation,agree\n", 0) == 0);
  CHECK(csv.str().find("2,raw,4/3,4/3,4/3,true") != std::string::npos);
  const auto sweep = verify_encoding_sweep(3, 4, {true, false});
  CHECK(sweep.size() == 24);
  for (const auto& v : sweep) CHECK(v.total_violations() == 0);
}
