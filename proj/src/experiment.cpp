#include "caas/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <set>
#include <thread>

#include "caas/error.hpp"
#include "caas/scenario_io.hpp"

namespace caas {

using nlohmann::json;

namespace {

std::string format_interval(double seconds) {
  char buf[32];
  if (seconds == std::floor(seconds)) {
    std::snprintf(buf, sizeof buf, "%.0f", seconds);
  } else {
    std::snprintf(buf, sizeof buf, "%g", seconds);
  }
  return buf;
}

void check_known(const json& j, const std::string& where, std::initializer_list<const char*> keys) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* k : keys) known = known || it.key() == k;
    if (!known) throw ConfigError(where + "." + it.key(), "unknown field");
  }
}

ControllerVariant controller_variant_from_json(const json& j, std::size_t index) {
  ControllerVariant v;
  if (j.is_string()) {
    v.kind = controller_kind_from_string(j.get<std::string>());
    v.label = j.get<std::string>();
    return v;
  }
  const std::string where = "controllers[" + std::to_string(index) + "]";
  if (!j.is_object()) throw ConfigError(where, "expected a name or an object");
  json body = j;
  if (auto it = body.find("label"); it != body.end()) {
    if (!it->is_string()) throw ConfigError(where + ".label", "expected a string");
    v.label = it->get<std::string>();
    body.erase("label");
  }
  controller_from_json(body, v.kind, v.config);
  if (v.label.empty()) v.label = std::string(to_string(v.kind));
  v.config.validate();
  return v;
}

EstimatorVariant estimator_variant_from_json(const json& j, std::size_t index) {
  EstimatorVariant v;
  if (j.is_string()) {
    v.config = estimator_from_json(j);
    v.label = j.get<std::string>();
    return v;
  }
  const std::string where = "estimators[" + std::to_string(index) + "]";
  if (!j.is_object()) throw ConfigError(where, "expected a name or an object");
  json body = j;
  if (auto it = body.find("label"); it != body.end()) {
    if (!it->is_string()) throw ConfigError(where + ".label", "expected a string");
    v.label = it->get<std::string>();
    body.erase("label");
  }
  v.config = estimator_from_json(body);
  if (v.label.empty()) v.label = std::string(to_string(v.config.kind));
  v.config.validate();
  return v;
}

ScheduleOptions schedule_from_json(const json& j) {
  ScheduleOptions o;
  if (!j.is_object()) throw ConfigError("scenario.generate", "expected an object");
  check_known(j, "scenario.generate", {"large_positions", "requested_ttc", "arrival_spacing"});
  try {
    if (j.contains("large_positions")) o.large_positions = j.at("large_positions").get<std::array<std::size_t, 2>>();
    if (j.contains("requested_ttc")) o.requested_ttc = j.at("requested_ttc").get<double>();
    if (j.contains("arrival_spacing")) o.arrival_spacing = j.at("arrival_spacing").get<double>();
  } catch (const json::exception& e) {
    throw ConfigError("scenario.generate", e.what());
  }
  if (!(o.requested_ttc > 0.0)) throw ConfigError("scenario.generate.requested_ttc", "must be positive");
  if (!(o.arrival_spacing >= 0.0)) throw ConfigError("scenario.generate.arrival_spacing", "must be non-negative");
  return o;
}

TtcSetting ttc_from_json(const json& j) {
  TtcSetting t;
  if (j.is_number()) {
    t.mode = TtcMode::Fixed;
    t.seconds = j.get<double>();
  } else if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "scenario") {
      t.mode = TtcMode::Scenario;
    } else if (s == "as-calibrated") {
      t.mode = TtcMode::AsCalibrated;
    } else {
      throw ConfigError("ttc", "unknown mode '" + s + "'");
    }
  } else if (j.is_object()) {
    check_known(j, "ttc", {"mode", "seconds", "as_step"});
    const auto mode = j.value("mode", std::string("scenario"));
    if (mode == "fixed") {
      t.mode = TtcMode::Fixed;
      if (!j.contains("seconds") || !j.at("seconds").is_number()) throw ConfigError("ttc.seconds", "required for fixed mode");
      t.seconds = j.at("seconds").get<double>();
    } else if (mode == "as-calibrated") {
      t.mode = TtcMode::AsCalibrated;
      if (j.contains("as_step")) {
        if (!j.at("as_step").is_number_integer()) throw ConfigError("ttc.as_step", "expected an integer");
        t.as_step = j.at("as_step").get<int>();
      }
    } else if (mode != "scenario") {
      throw ConfigError("ttc.mode", "unknown mode '" + mode + "'");
    }
  } else {
    throw ConfigError("ttc", "expected a number, a mode name or an object");
  }
  return t;
}

// Scenario for one seed and interval before controller and estimator are set.
Scenario base_scenario(const ExperimentSpec& spec, std::uint64_t seed, double interval) {
  Scenario s;
  if (spec.scenario) {
    s = *spec.scenario;
    s.rng_seed = seed;
  } else if (spec.scenario_path) {
    s = load_scenario(*spec.scenario_path);
    s.rng_seed = seed;
  } else {
    s = generate_paper_schedule(seed, spec.schedule);
  }
  if (interval > 0.0) s.monitoring_interval = interval;
  return s;
}

void apply_ttc(Scenario& s, double ttc) {
  for (auto& w : s.workloads) w.requested_ttc = ttc;
}

json result_to_json(const SimulationResult& r) {
  json cost = json::array();
  for (const auto& c : r.cost_series) cost.push_back({c.t, c.cumulative_cost, c.fleet_size, c.n_star});
  json outcomes = json::array();
  for (const auto& o : r.outcomes) {
    outcomes.push_back({{"id", o.id.value},
                        {"class", o.workload_class},
                        {"arrival_time", o.arrival_time},
                        {"finish_time", o.finish_time},
                        {"deadline", o.deadline},
                        {"confirmed", o.confirmed},
                        {"t_init_time", o.t_init_time ? json(*o.t_init_time) : json(nullptr)},
                        {"ttc_met", o.ttc_met}});
  }
  json predictions = json::array();
  for (const auto& p : r.predictions) {
    json samples = json::array();
    for (const auto& s : p.samples) {
      samples.push_back({s.t, s.measurement ? json(*s.measurement) : json(nullptr), s.prediction, s.true_mean});
    }
    predictions.push_back({{"workload", p.workload.value},
                           {"data_type", p.data_type.value},
                           {"class", p.workload_class},
                           {"arrival_time", p.arrival_time},
                           {"t_init_index", p.t_init_index ? json(*p.t_init_index) : json(nullptr)},
                           {"samples", std::move(samples)}});
  }
  return json{{"cost_series", std::move(cost)},     {"outcomes", std::move(outcomes)},
              {"predictions", std::move(predictions)}, {"max_instances", r.max_instances},
              {"total_cost", r.total_cost},         {"lb", r.lb},
              {"cus_consumed", r.cus_consumed},     {"end_time", r.end_time}};
}

SimulationResult result_from_json(const json& j) {
  SimulationResult r;
  for (const auto& c : j.at("cost_series")) {
    r.cost_series.push_back({c.at(0).get<double>(), c.at(1).get<double>(), c.at(2).get<int>(), c.at(3).get<double>()});
  }
  for (const auto& o : j.at("outcomes")) {
    WorkloadOutcome w;
    w.id.value = o.at("id").get<std::string>();
    w.workload_class = o.at("class").get<std::string>();
    w.arrival_time = o.at("arrival_time").get<double>();
    w.finish_time = o.at("finish_time").get<double>();
    w.deadline = o.at("deadline").get<double>();
    w.confirmed = o.at("confirmed").get<bool>();
    if (!o.at("t_init_time").is_null()) w.t_init_time = o.at("t_init_time").get<double>();
    w.ttc_met = o.at("ttc_met").get<bool>();
    r.outcomes.push_back(std::move(w));
  }
  for (const auto& p : j.at("predictions")) {
    PredictionTrace t;
    t.workload.value = p.at("workload").get<std::string>();
    t.data_type.value = p.at("data_type").get<std::string>();
    t.workload_class = p.at("class").get<std::string>();
    t.arrival_time = p.at("arrival_time").get<double>();
    if (!p.at("t_init_index").is_null()) t.t_init_index = p.at("t_init_index").get<std::size_t>();
    for (const auto& s : p.at("samples")) {
      PredictionSample ps;
      ps.t = s.at(0).get<double>();
      if (!s.at(1).is_null()) ps.measurement = s.at(1).get<double>();
      ps.prediction = s.at(2).get<double>();
      ps.true_mean = s.at(3).get<double>();
      t.samples.push_back(ps);
    }
    r.predictions.push_back(std::move(t));
  }
  r.max_instances = j.at("max_instances").get<int>();
  r.total_cost = j.at("total_cost").get<double>();
  r.lb = j.at("lb").get<double>();
  r.cus_consumed = j.at("cus_consumed").get<double>();
  r.end_time = j.at("end_time").get<double>();
  return r;
}

json cell_to_json(const CellKey& k) {
  return json{{"controller", k.controller},
              {"estimator", k.estimator},
              {"monitoring_interval", k.monitoring_interval},
              {"seed", k.seed}};
}

json stats_to_json(const ClassPredictionStats& s) {
  return json{{"mean_time_to_prediction_s", s.mean_time_to_prediction},
              {"mae_percent", s.mae_percent},
              {"converged", s.converged},
              {"excluded", s.excluded}};
}

struct MaeAccumulator {
  struct Sums {
    double time = 0.0;
    double mae = 0.0;
    int converged = 0;
    int excluded = 0;
  };
  std::map<std::string, Sums> per_class;
  std::vector<std::string> unconverged;

  void add(const PredictionTrace& t, const std::string& prefix) {
    auto& sums = per_class[t.workload_class];
    if (!t.t_init_index || *t.t_init_index >= t.samples.size()) {
      ++sums.excluded;
      unconverged.push_back(prefix + t.workload.value + "/" + t.data_type.value);
      return;
    }
    const auto& s = t.samples[*t.t_init_index];
    if (!(s.true_mean > 0.0)) throw InputDomainError("true mean CUS must be positive for MAE");
    sums.time += s.t - t.arrival_time;
    sums.mae += 100.0 * std::abs(s.prediction - s.true_mean) / s.true_mean;
    ++sums.converged;
  }

  MaeSummary finish() const {
    MaeSummary out;
    double time = 0.0;
    double mae = 0.0;
    int classes = 0;
    for (const auto& [cls, sums] : per_class) {
      ClassPredictionStats st;
      st.converged = sums.converged;
      st.excluded = sums.excluded;
      if (sums.converged > 0) {
        st.mean_time_to_prediction = sums.time / sums.converged;
        st.mae_percent = sums.mae / sums.converged;
        time += st.mean_time_to_prediction;
        mae += st.mae_percent;
        ++classes;
      }
      out.overall.converged += st.converged;
      out.overall.excluded += st.excluded;
      out.per_class[cls] = st;
    }
    if (classes > 0) {
      out.overall.mean_time_to_prediction = time / classes;
      out.overall.mae_percent = mae / classes;
    }
    out.unconverged = unconverged;
    return out;
  }
};

}  // namespace

void ExperimentSpec::validate() const {
  if (controllers.empty()) throw ConfigError("controllers", "at least one controller is required");
  if (estimators.empty()) throw ConfigError("estimators", "at least one estimator is required");
  if (seeds.empty()) throw ConfigError("seeds", "at least one seed is required");
  if (workers < 1) throw ConfigError("workers", "must be at least 1");
  std::set<std::string> labels;
  for (const auto& c : controllers) {
    if (!labels.insert(c.label).second) throw ConfigError("controllers", "duplicate label '" + c.label + "'");
  }
  labels.clear();
  for (const auto& e : estimators) {
    if (!labels.insert(e.label).second) throw ConfigError("estimators", "duplicate label '" + e.label + "'");
  }
  if (std::set<std::uint64_t>(seeds.begin(), seeds.end()).size() != seeds.size()) {
    throw ConfigError("seeds", "duplicate seed");
  }
  for (double m : monitoring_intervals) {
    if (!(m > 0.0)) throw ConfigError("monitoring_intervals", "must be positive");
  }
  if (ttc.mode == TtcMode::Fixed && !(ttc.seconds > 0.0)) throw ConfigError("ttc.seconds", "must be positive");
  if (ttc.mode == TtcMode::AsCalibrated && ttc.as_step < 1) throw ConfigError("ttc.as_step", "must be at least 1");
  if (scenario) scenario->validate();
}

ExperimentSpec experiment_from_json(const json& j, const std::filesystem::path& base_dir) {
  if (!j.is_object()) throw ConfigError("<root>", "expected an object");
  check_known(j, "experiment",
              {"schema", "scenario", "controllers", "estimators", "seeds", "monitoring_intervals", "ttc", "output_dir",
               "workers"});
  ExperimentSpec spec;
  if (j.contains("schema") && j.at("schema") != kExperimentSchema) {
    throw ConfigError("schema", "expected '" + std::string(kExperimentSchema) + "'");
  }
  if (j.contains("scenario")) {
    const auto& s = j.at("scenario");
    if (s.is_string()) {
      std::filesystem::path p = s.get<std::string>();
      spec.scenario_path = p.is_relative() && !base_dir.empty() ? base_dir / p : p;
    } else if (s.is_object() && s.contains("generate")) {
      if (s.size() != 1) throw ConfigError("scenario", "'generate' cannot be combined with other fields");
      spec.schedule = schedule_from_json(s.at("generate"));
    } else if (s.is_object()) {
      spec.scenario = scenario_from_json(s);
    } else {
      throw ConfigError("scenario", "expected a path, {\"generate\": {...}} or an inline scenario");
    }
  }
  auto list = [&](const char* key) -> const json& {
    if (!j.contains(key) || !j.at(key).is_array()) throw ConfigError(key, "expected a non-empty array");
    return j.at(key);
  };
  const auto& controllers = list("controllers");
  for (std::size_t i = 0; i < controllers.size(); ++i) spec.controllers.push_back(controller_variant_from_json(controllers[i], i));
  const auto& estimators = list("estimators");
  for (std::size_t i = 0; i < estimators.size(); ++i) spec.estimators.push_back(estimator_variant_from_json(estimators[i], i));
  for (const auto& s : list("seeds")) {
    if (!s.is_number_integer() || (!s.is_number_unsigned() && s.get<std::int64_t>() < 0)) {
      throw ConfigError("seeds", "seeds must be non-negative integers");
    }
    spec.seeds.push_back(s.get<std::uint64_t>());
  }
  if (j.contains("monitoring_intervals")) {
    for (const auto& m : list("monitoring_intervals")) {
      if (!m.is_number()) throw ConfigError("monitoring_intervals", "expected numbers");
      spec.monitoring_intervals.push_back(m.get<double>());
    }
  }
  if (j.contains("ttc")) spec.ttc = ttc_from_json(j.at("ttc"));
  if (j.contains("output_dir")) {
    if (!j.at("output_dir").is_string()) throw ConfigError("output_dir", "expected a string");
    spec.output_dir = j.at("output_dir").get<std::string>();
  }
  if (j.contains("workers")) {
    if (!j.at("workers").is_number_integer()) throw ConfigError("workers", "expected an integer");
    spec.workers = j.at("workers").get<int>();
  }
  spec.validate();
  return spec;
}

ExperimentSpec load_experiment(const std::filesystem::path& path) {
  return experiment_from_json(read_json_file(path), path.parent_path());
}

std::string CellKey::name() const {
  return controller + "_" + estimator + "_" + format_interval(monitoring_interval) + "s_seed" + std::to_string(seed);
}

MaeSummary compute_mae(std::span<const PredictionTrace> traces) {
  MaeAccumulator acc;
  for (const auto& t : traces) acc.add(t, "");
  return acc.finish();
}

MetricsReport build_report(std::span<const RunLog> logs) {
  MetricsReport report;
  std::map<std::tuple<std::string, std::string, double>, std::vector<const RunLog*>> by_controller;
  std::map<std::pair<std::string, double>, MaeAccumulator> by_estimator;
  std::vector<const RunLog*> ordered;
  for (const auto& l : logs) ordered.push_back(&l);
  std::sort(ordered.begin(), ordered.end(), [](const RunLog* a, const RunLog* b) { return a->key < b->key; });
  for (const RunLog* l : ordered) {
    report.cells.push_back(l->key);
    by_controller[{l->key.controller, l->key.estimator, l->key.monitoring_interval}].push_back(l);
    auto& acc = by_estimator[{l->key.estimator, l->key.monitoring_interval}];
    for (const auto& t : l->result.predictions) acc.add(t, l->key.name() + "/");
  }
  for (const auto& [key, group] : by_controller) {
    ControllerRow row;
    std::tie(row.controller, row.estimator, row.monitoring_interval) = key;
    for (const RunLog* l : group) {
      row.seed_costs.push_back(l->result.total_cost);
      row.mean_cost += l->result.total_cost;
      row.mean_lb += l->result.lb;
      row.max_instances = std::max(row.max_instances, l->result.max_instances);
      for (const auto& o : l->result.outcomes) {
        ++row.workloads;
        row.ttc_met += o.ttc_met ? 1 : 0;
      }
    }
    row.mean_cost /= static_cast<double>(group.size());
    row.mean_lb /= static_cast<double>(group.size());
    row.excess_over_lb_percent = row.mean_lb > 0.0 ? 100.0 * (row.mean_cost - row.mean_lb) / row.mean_lb : 0.0;
    report.controllers.push_back(std::move(row));
  }
  for (const auto& [key, acc] : by_estimator) {
    report.estimators.push_back({key.first, key.second, acc.finish()});
  }
  return report;
}

json report_to_json(const MetricsReport& report) {
  json cells = json::array();
  for (const auto& c : report.cells) cells.push_back(cell_to_json(c));
  json controllers = json::array();
  for (const auto& r : report.controllers) {
    controllers.push_back({{"controller", r.controller},
                           {"estimator", r.estimator},
                           {"monitoring_interval", r.monitoring_interval},
                           {"mean_cost", r.mean_cost},
                           {"mean_lb", r.mean_lb},
                           {"excess_over_lb_percent", r.excess_over_lb_percent},
                           {"max_instances", r.max_instances},
                           {"ttc_met", r.ttc_met},
                           {"workloads", r.workloads},
                           {"seed_costs", r.seed_costs}});
  }
  json estimators = json::array();
  for (const auto& e : report.estimators) {
    json classes = json::object();
    for (const auto& [cls, st] : e.stats.per_class) classes[cls] = stats_to_json(st);
    estimators.push_back({{"estimator", e.estimator},
                          {"monitoring_interval", e.monitoring_interval},
                          {"classes", std::move(classes)},
                          {"overall", stats_to_json(e.stats.overall)},
                          {"unconverged", e.stats.unconverged}});
  }
  return json{{"schema", kReportSchema},
              {"cells", std::move(cells)},
              {"controllers", std::move(controllers)},
              {"estimators", std::move(estimators)}};
}

json run_log_to_json(const RunLog& log) {
  return json{{"schema", kRunLogSchema},
              {"cell", cell_to_json(log.key)},
              {"requested_ttc", log.requested_ttc},
              {"result", result_to_json(log.result)}};
}

RunLog run_log_from_json(const json& j) {
  if (j.value("schema", std::string()) != kRunLogSchema) throw ConfigError("schema", "not a run log");
  try {
    RunLog log;
    const auto& c = j.at("cell");
    log.key.controller = c.at("controller").get<std::string>();
    log.key.estimator = c.at("estimator").get<std::string>();
    log.key.monitoring_interval = c.at("monitoring_interval").get<double>();
    log.key.seed = c.at("seed").get<std::uint64_t>();
    log.requested_ttc = j.at("requested_ttc").get<double>();
    log.result = result_from_json(j.at("result"));
    return log;
  } catch (const json::exception& e) {
    throw ConfigError("run log", e.what());
  }
}

std::string cost_series_csv(const SimulationResult& result) {
  std::string out = "t_seconds,cumulative_cost,fleet_size,n_star\n";
  char line[128];
  for (const auto& c : result.cost_series) {
    std::snprintf(line, sizeof line, "%.3f,%.6f,%d,%.6f\n", c.t, c.cumulative_cost, c.fleet_size, c.n_star);
    out += line;
  }
  return out;
}

double calibrate_ttc(Scenario scenario, int as_step) {
  scenario.controller_kind = ControllerKind::UtilizationAs;
  scenario.controller.as_step = as_step;
  const auto result = run(scenario);
  double longest = 0.0;
  for (const auto& o : result.outcomes) longest = std::max(longest, o.finish_time - o.arrival_time);
  return std::ceil(longest);
}

namespace {

// Runs jobs on `workers` threads; results land at their own index.
template <class Job>
void parallel_for(std::size_t count, int workers, Job job) {
  std::atomic<std::size_t> next{0};
  auto loop = [&] {
    for (std::size_t i = next++; i < count; i = next++) job(i);
  };
  const auto n = std::min<std::size_t>(static_cast<std::size_t>(workers), count);
  std::vector<std::thread> threads;
  for (std::size_t t = 1; t < n; ++t) threads.emplace_back(loop);
  loop();
  for (auto& t : threads) t.join();
}

}  // namespace

ExperimentOutput run_experiment(const ExperimentSpec& spec) {
  spec.validate();
  const std::vector<double> intervals =
      spec.monitoring_intervals.empty() ? std::vector<double>{0.0} : spec.monitoring_intervals;

  struct Base {
    std::uint64_t seed;
    double interval;
    Scenario scenario;
    double ttc = 0.0;
    std::string error;
  };
  std::vector<Base> bases;
  for (double m : intervals) {
    for (auto seed : spec.seeds) bases.push_back({seed, m, base_scenario(spec, seed, m), 0.0, {}});
  }
  parallel_for(bases.size(), spec.workers, [&](std::size_t i) {
    auto& b = bases[i];
    try {
      if (spec.ttc.mode == TtcMode::Fixed) b.ttc = spec.ttc.seconds;
      if (spec.ttc.mode == TtcMode::AsCalibrated) b.ttc = calibrate_ttc(b.scenario, spec.ttc.as_step);
      if (b.ttc > 0.0) apply_ttc(b.scenario, b.ttc);
    } catch (const std::exception& e) {
      b.error = e.what();
    }
  });
  for (const auto& b : bases) {
    if (!b.error.empty()) {
      throw Error("TTC calibration failed for interval=" + format_interval(b.scenario.monitoring_interval) +
                  " seed=" + std::to_string(b.seed) + ": " + b.error);
    }
  }

  struct Cell {
    const Base* base;
    const ControllerVariant* controller;
    const EstimatorVariant* estimator;
  };
  std::vector<Cell> cells;
  for (const auto& b : bases) {
    for (const auto& c : spec.controllers) {
      for (const auto& e : spec.estimators) cells.push_back({&b, &c, &e});
    }
  }

  std::vector<RunLog> logs(cells.size());
  std::vector<std::string> errors(cells.size());
  parallel_for(cells.size(), spec.workers, [&](std::size_t i) {
    const Cell& cell = cells[i];
    Scenario s = cell.base->scenario;
    s.controller_kind = cell.controller->kind;
    s.controller = cell.controller->config;
    s.estimator = cell.estimator->config;
    RunLog& log = logs[i];
    log.key = {cell.controller->label, cell.estimator->label, s.monitoring_interval, cell.base->seed};
    log.requested_ttc = cell.base->ttc;
    try {
      log.result = run(s);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  });
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (!errors[i].empty()) {
      const auto& k = logs[i].key;
      throw Error("run failed for controller=" + k.controller + " estimator=" + k.estimator +
                  " interval=" + format_interval(k.monitoring_interval) + " seed=" + std::to_string(k.seed) + ": " +
                  errors[i]);
    }
  }

  ExperimentOutput out;
  out.report = build_report(logs);
  out.logs = std::move(logs);
  return out;
}

void write_outputs(const ExperimentOutput& out, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir / "csv");
  std::filesystem::create_directories(dir / "runs");
  for (const auto& log : out.logs) {
    write_text_file(dir / "csv" / (log.key.name() + ".csv"), cost_series_csv(log.result));
    write_text_file(dir / "runs" / (log.key.name() + ".json"), run_log_to_json(log).dump() + "\n");
  }
  write_text_file(dir / "summary.json", report_to_json(out.report).dump(2) + "\n");
}

MetricsReport report_from_run_logs(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir / "runs")) {
    if (entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<RunLog> logs;
  for (const auto& f : files) logs.push_back(run_log_from_json(read_json_file(f)));
  return build_report(logs);
}

}  // namespace caas
