#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "caas/error.hpp"
#include "caas/experiment.hpp"
#include "caas/scenario_io.hpp"
#include "doctest.h"

using namespace caas;
using nlohmann::json;

namespace {

std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("caas_cli_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

json small_scenario() {
  return json{{"schema", "caas.scenario/v1"},
              {"workloads",
               {{{"id", "a"},
                 {"class", "faces"},
                 {"arrival_time", 0},
                 {"requested_ttc", 3600},
                 {"types", {{{"data_type", "image"}, {"items", 120}, {"mean_cus", 4.0}}}}},
                {{"id", "b"},
                 {"class", "video"},
                 {"arrival_time", 300},
                 {"requested_ttc", 3600},
                 {"types", {{{"data_type", "video"}, {"items", 6}, {"mean_cus", 60.0}, {"task_cv", 0.4}}}}}}}};
}

PredictionTrace trace(std::string cls, double predicted, double truth, bool converged = true) {
  PredictionTrace t;
  t.workload = WorkloadId{"w"};
  t.data_type = DataTypeId{"image"};
  t.workload_class = std::move(cls);
  t.arrival_time = 0.0;
  t.samples = {{60.0, 1.0, 0.0, truth}, {120.0, 1.0, predicted, truth}};
  if (converged) t.t_init_index = 1;
  return t;
}

}  // namespace

TEST_CASE("minimal scenario file takes defaults") {
  const auto s = scenario_from_json(json{{"workloads", json::array()}});
  CHECK(s == Scenario{});
  const auto t = scenario_from_json(small_scenario());
  CHECK(t.workloads.size() == 2);
  CHECK(t.workloads[0].types[0].truth.task_cv == TruthProfile{}.task_cv);
  CHECK(t.controller == ControllerConfig{});
}

TEST_CASE("scenario round trip") {
  auto s = generate_paper_schedule(4);
  s.controller_kind = ControllerKind::Lr;
  s.controller.alpha = 3.5;
  s.estimator.kind = EstimatorKind::Arma;
  s.estimator.window = 5;
  s.work_conserving = false;
  s.horizon = 123456.0;
  CHECK(scenario_from_json(parse_json(dump_scenario(s))) == s);

  const auto dir = scratch_dir("roundtrip");
  save_scenario(dir / "s.json", s);
  CHECK(load_scenario(dir / "s.json") == s);
}

TEST_CASE("out-of-range values name their field") {
  auto j = small_scenario();
  j["controller"] = {{"variant", "aimd"}, {"beta", 1.5}};
  try {
    scenario_from_json(j);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.field() == "beta");
  }
  j = small_scenario();
  j["workloads"][1]["types"][0]["items"] = -3;
  CHECK_THROWS_AS(scenario_from_json(j), ConfigError);
}

TEST_CASE("unknown and mistyped fields are rejected with a path") {
  auto j = small_scenario();
  j["workloads"][0]["types"][0]["mean"] = 3;
  try {
    scenario_from_json(j);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.field() == "workloads[0].types[0].mean");
  }
  j = small_scenario();
  j["monitoring_interval"] = "five minutes";
  CHECK_THROWS_WITH_AS(scenario_from_json(j), doctest::Contains("monitoring_interval"), ConfigError);
  j = small_scenario();
  j["schema"] = "caas.scenario/v0";
  CHECK_THROWS_AS(scenario_from_json(j), ConfigError);
}

TEST_CASE("parse errors carry line and column") {
  const std::string text = "{\n  \"workloads\": [\n    ,\n  ]\n}\n";
  try {
    parse_json(text, "bad.json");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
    CHECK(e.column() == 5);
    CHECK(std::string(e.what()).rfind("bad.json:3:5:", 0) == 0);
  }
}

TEST_CASE("compute_mae") {
  std::vector<PredictionTrace> exact{trace("a", 10.0, 10.0)};
  CHECK(compute_mae(exact).overall.mae_percent == 0.0);
  std::vector<PredictionTrace> small{trace("a", 10.45, 10.0)};
  CHECK(compute_mae(small).overall.mae_percent == doctest::Approx(4.5));
  std::vector<PredictionTrace> half{trace("a", 5.0, 10.0)};
  CHECK(compute_mae(half).overall.mae_percent == doctest::Approx(50.0));

  // class means, then the mean of those
  std::vector<PredictionTrace> mixed{trace("a", 11.0, 10.0), trace("a", 13.0, 10.0), trace("b", 5.0, 10.0),
                                     trace("b", 1.0, 10.0, false)};
  const auto m = compute_mae(mixed);
  CHECK(m.per_class.at("a").mae_percent == doctest::Approx(20.0));
  CHECK(m.per_class.at("b").mae_percent == doctest::Approx(50.0));
  CHECK(m.per_class.at("b").excluded == 1);
  CHECK(m.overall.mae_percent == doctest::Approx(35.0));
  CHECK(m.overall.mean_time_to_prediction == doctest::Approx(120.0));
  CHECK(m.unconverged.size() == 1);
}

TEST_CASE("experiment spec parsing") {
  json j{{"schema", "caas.experiment/v1"},
         {"scenario", {{"generate", {{"large_positions", {2, 9}}}}}},
         {"controllers", {"aimd", {{"variant", "as"}, {"label", "as10"}, {"as_step", 10}}}},
         {"estimators", {"kalman"}},
         {"seeds", {1, 2}},
         {"monitoring_intervals", {60, 300}},
         {"ttc", {{"mode", "as-calibrated"}, {"as_step", 10}}}};
  const auto spec = experiment_from_json(j);
  CHECK(spec.controllers.size() == 2);
  CHECK(spec.controllers[1].label == "as10");
  CHECK(spec.controllers[1].config.as_step == 10);
  CHECK(spec.ttc.mode == TtcMode::AsCalibrated);
  CHECK(spec.schedule.large_positions.has_value());

  auto bad = j;
  bad["seeds"] = json::array();
  CHECK_THROWS_AS(experiment_from_json(bad), ConfigError);
  bad = j;
  bad["controllers"] = {"aimd", "aimd"};
  CHECK_THROWS_AS(experiment_from_json(bad), ConfigError);
  bad = j;
  bad["extra"] = 1;
  CHECK_THROWS_AS(experiment_from_json(bad), ConfigError);
}

TEST_CASE("experiment: cells, aggregation, CSV ordering and report replay") {
  ExperimentSpec spec;
  spec.scenario = scenario_from_json(small_scenario());
  spec.controllers = {{"aimd", ControllerKind::Aimd, {}}, {"reactive", ControllerKind::Reactive, {}}};
  spec.estimators = {{"kalman", {}}};
  spec.seeds = {1, 2};
  spec.workers = 3;
  const auto out = run_experiment(spec);
  REQUIRE(out.logs.size() == 4);
  REQUIRE(out.report.controllers.size() == 2);
  for (const auto& row : out.report.controllers) {
    REQUIRE(row.seed_costs.size() == 2);
    CHECK(row.mean_cost == doctest::Approx((row.seed_costs[0] + row.seed_costs[1]) / 2.0));
    CHECK(row.mean_cost >= row.mean_lb);
    CHECK(row.workloads == 4);
  }
  CHECK(out.report.cells.front().name() == "aimd_kalman_300s_seed1");

  for (const auto& log : out.logs) {
    const auto csv = cost_series_csv(log.result);
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    CHECK(line == "t_seconds,cumulative_cost,fleet_size,n_star");
    double t = -1.0;
    double cost = 0.0;
    while (std::getline(in, line)) {
      double nt = 0.0, nc = 0.0;
      REQUIRE(std::sscanf(line.c_str(), "%lf,%lf", &nt, &nc) == 2);
      CHECK(nt > t);
      CHECK(nc >= cost);
      t = nt;
      cost = nc;
    }
  }

  const auto dir = scratch_dir("replay");
  write_outputs(out, dir);
  CHECK(report_from_run_logs(dir) == out.report);
  CHECK(std::filesystem::exists(dir / "summary.json"));
  CHECK(std::filesystem::exists(dir / "csv" / "reactive_kalman_300s_seed2.csv"));
  const auto summary = read_json_file(dir / "summary.json");
  CHECK(summary.at("schema") == "caas.report/v1");
  CHECK(report_to_json(report_from_run_logs(dir)) == summary);

  for (const auto& log : out.logs) CHECK(run_log_from_json(run_log_to_json(log)) == log);
}

TEST_CASE("experiment failure names the cell") {
  ExperimentSpec spec;
  auto s = scenario_from_json(small_scenario());
  s.horizon = 200.0;
  spec.scenario = s;
  spec.controllers = {{"aimd", ControllerKind::Aimd, {}}};
  spec.estimators = {{"kalman", {}}};
  spec.seeds = {7};
  CHECK_THROWS_WITH_AS(run_experiment(spec), doctest::Contains("controller=aimd estimator=kalman interval=300 seed=7"),
                       Error);
}

TEST_CASE("fixed and calibrated TTC settings rewrite requested TTCs") {
  ExperimentSpec spec;
  spec.scenario = scenario_from_json(small_scenario());
  spec.controllers = {{"aimd", ControllerKind::Aimd, {}}};
  spec.estimators = {{"kalman", {}}};
  spec.seeds = {1};
  spec.ttc = {TtcMode::Fixed, 5000.0, 1};
  CHECK(run_experiment(spec).logs[0].requested_ttc == 5000.0);
  spec.ttc = {TtcMode::AsCalibrated, 0.0, 1};
  const double calibrated = run_experiment(spec).logs[0].requested_ttc;
  CHECK(calibrated == calibrate_ttc(*spec.scenario, 1));
  CHECK(calibrated > 0.0);
}
