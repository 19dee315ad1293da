#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ksosbo/errors.hpp"
#include "ksosbo/experiment.hpp"
#include "ksosbo/records_io.hpp"

using namespace ksosbo;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json tiny_config() {
  return json::parse(R"({
    "benchmarks": [{"name": "sphere", "dim": 2}],
    "optimizers": [{"kind": "ksos"}, {"kind": "sobol"}, {"kind": "cmaes", "label": "cma"}],
    "n_init": 4, "n_iters": 3, "budget": 32, "seeds": [0, 1],
    "gp": {"restarts": 1}
  })");
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("ksosbo_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(RecordsIo, DoublesRoundTrip) {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 123456789.123456789}) {
    EXPECT_EQ(parse_double(format_double(v), "t"), v);
  }
  EXPECT_THROW(parse_double("1.5x", "t"), InputError);
  const auto cells = split_csv_line(R"(a,"b,c",,d)");
  ASSERT_EQ(cells.size(), 4u);
  EXPECT_EQ(cells[1], "b,c");
  EXPECT_EQ(cells[2], "");
}

TEST(RecordsIo, RunCsvRoundTrip) {
  RunRecord r;
  r.benchmark = "ackley";
  r.dim = 2;
  r.optimizer = "ksos";
  r.acquisition = "ei";
  r.seed = 4;
  r.fingerprint = "abc";
  for (int i = 0; i < 3; ++i) {
    RunRow row;
    row.iteration = i + 1;
    row.query = Point::Constant(2, 0.1 * i + 1.0 / 7.0);
    row.observed = 3.0 - i;
    row.best_so_far = 3.0 - i;
    row.regret = 3.0 - i;
    row.iter_wall_seconds = 0.01;
    row.cum_wall_seconds = 0.01 * (i + 1);
    r.rows.push_back(row);
  }
  const fs::path dir = scratch("csv");
  fs::create_directories(dir);
  write_run_csv(dir / "r.csv", {&r});
  const auto back = read_run_csv(dir / "r.csv");
  ASSERT_EQ(back.size(), 1u);
  ASSERT_EQ(back[0].rows.size(), 3u);
  EXPECT_EQ(back[0].seed, 4u);
  EXPECT_EQ(back[0].rows[2].query, r.rows[2].query);
  EXPECT_EQ(back[0].rows[1].regret, 2.0);
  EXPECT_EQ(run_csv_name("ackley", 2, "ksos"), "runs_ackley_d2_ksos.csv");
}

TEST(RecordsIo, RejectsWrongHeader) {
  const fs::path dir = scratch("hdr");
  fs::create_directories(dir);
  std::ofstream(dir / "bad.csv") << "benchmark,dim\nackley,2\n";
  EXPECT_THROW(read_run_csv(dir / "bad.csv"), InputError);
  EXPECT_THROW(read_run_csv(dir / "missing.csv"), IoError);
}

TEST(Config, ParsesAndRoundTrips) {
  const ExperimentSpec s = parse_experiment(tiny_config());
  EXPECT_EQ(s.optimizers.size(), 3u);
  EXPECT_EQ(s.optimizers[2].name(), "cma");
  EXPECT_EQ(s.base.gp_restarts, 1);
  const ExperimentSpec again = parse_experiment(to_json(s));
  EXPECT_EQ(to_json(again), to_json(s));
  EXPECT_EQ(config_fingerprint(again), config_fingerprint(s));
  json other = tiny_config();
  other["budget"] = 64;
  EXPECT_NE(config_fingerprint(parse_experiment(other)), config_fingerprint(s));
}

TEST(Config, RejectsUnknownAndInvalid) {
  json j = tiny_config();
  j["budjet"] = 10;
  EXPECT_THROW(parse_experiment(j), ConfigError);
  j = tiny_config();
  j["optimizers"][0]["sigma"] = 1.0;
  EXPECT_THROW(parse_experiment(j), ConfigError);
  j = tiny_config();
  j["optimizers"][1]["label"] = "ksos";
  EXPECT_THROW(parse_experiment(j), ConfigError);
  j = tiny_config();
  j["benchmarks"][0] = {{"name", "powell"}, {"dim", 3}};
  EXPECT_THROW(parse_experiment(j), ConfigError);
  j = tiny_config();
  j["benchmarks"][0] = {{"name", "michalewicz"}, {"dim", 2}};
  EXPECT_THROW(parse_experiment(j), ConfigError);
  j = tiny_config();
  j["n_init"] = "four";
  EXPECT_THROW(parse_experiment(j), ConfigError);
  j = tiny_config();
  j["ksos"] = {{"lambda_reg", "auto"}};
  EXPECT_NO_THROW(parse_experiment(j));
}

TEST(Experiment, WritesEveryFileAndVerifies) {
  const ExperimentSpec s = parse_experiment(tiny_config());
  const fs::path dir = scratch("run");
  const ExperimentResult res = run_experiment(s, dir, 2);
  EXPECT_EQ(res.runs_total, 6);
  EXPECT_EQ(res.runs_failed, 0);
  for (const char* f : {"manifest.json", "summary.csv", "failures.csv", "runs_sphere_d2_ksos.csv",
                        "runs_sphere_d2_sobol.csv", "runs_sphere_d2_cma.csv", "diag_sphere_d2_ksos.csv"}) {
    EXPECT_TRUE(fs::exists(dir / f)) << f;
  }
  const json m = json::parse(slurp(dir / "manifest.json"));
  EXPECT_EQ(m.at("fingerprint"), config_fingerprint(s));
  EXPECT_EQ(m.at("groups").size(), 3u);
  const auto runs = read_run_csv(dir / "runs_sphere_d2_sobol.csv");
  ASSERT_EQ(runs.size(), 2u);
  EXPECT_EQ(runs[0].rows.size(), 7u);
  EXPECT_EQ(res.summary.size(), 3u);

  const VerifyReport v = verify_directory(dir);
  EXPECT_TRUE(v.ok()) << (v.discrepancies.empty() ? "" : v.discrepancies.front());
  EXPECT_GT(v.rows_checked, 0);

  // Same config, fresh directory: identical regret columns.
  const fs::path dir2 = scratch("run2");
  run_experiment(s, dir2, 1);
  for (const char* f : {"runs_sphere_d2_ksos.csv", "runs_sphere_d2_cma.csv"}) {
    const auto a = read_run_csv(dir / f), b = read_run_csv(dir2 / f);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
      for (std::size_t i = 0; i < a[k].rows.size(); ++i) EXPECT_EQ(a[k].rows[i].regret, b[k].rows[i].regret);
    }
  }
}

TEST(Experiment, VerifyCatchesTampering) {
  const ExperimentSpec s = parse_experiment(tiny_config());
  const fs::path dir = scratch("tamper");
  run_experiment(s, dir, 1);
  std::string summary = slurp(dir / "summary.csv");
  const auto line = summary.find('\n') + 1;
  auto comma = summary.find(',', summary.find(',', summary.find(',', line) + 1) + 1);
  summary.insert(comma + 1, "9");
  std::ofstream(dir / "summary.csv") << summary;
  EXPECT_FALSE(verify_directory(dir).ok());
}
