#pragma once

// Experiment sweeps over (monitoring interval, controller, estimator, seed),
// raw run logs, and the aggregated report ("caas.report/v1").

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "caas/simulation.hpp"
#include "json.hpp"

namespace caas {

inline constexpr std::string_view kExperimentSchema = "caas.experiment/v1";
inline constexpr std::string_view kReportSchema = "caas.report/v1";
inline constexpr std::string_view kRunLogSchema = "caas.runlog/v1";

struct ControllerVariant {
  std::string label;
  ControllerKind kind = ControllerKind::Aimd;
  ControllerConfig config;
};

struct EstimatorVariant {
  std::string label;
  EstimatorConfig config;
};

enum class TtcMode {
  Scenario,      // keep each workload's requested TTC
  Fixed,         // one TTC for every workload
  AsCalibrated,  // longest completion time under the utilization policy
};

struct TtcSetting {
  TtcMode mode = TtcMode::Scenario;
  double seconds = 0.0;  // Fixed
  int as_step = 1;       // AsCalibrated
};

struct ExperimentSpec {
  // Exactly one source is used: a scenario file, an inline scenario, or the
  // generated thirty-workload schedule (one per seed).
  std::optional<std::filesystem::path> scenario_path;
  std::optional<Scenario> scenario;
  ScheduleOptions schedule;
  std::vector<ControllerVariant> controllers;
  std::vector<EstimatorVariant> estimators;
  std::vector<std::uint64_t> seeds;
  std::vector<double> monitoring_intervals;  // empty keeps the scenario's
  TtcSetting ttc;
  std::filesystem::path output_dir = "out";
  int workers = 1;

  void validate() const;
};

// `base_dir` resolves a relative scenario path.
ExperimentSpec experiment_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
ExperimentSpec load_experiment(const std::filesystem::path& path);

struct CellKey {
  std::string controller;
  std::string estimator;
  double monitoring_interval = 0.0;
  std::uint64_t seed = 0;

  std::string name() const;
  auto operator<=>(const CellKey&) const = default;
};

struct RunLog {
  CellKey key;
  double requested_ttc = 0.0;  // after calibration; 0 when workloads keep their own
  SimulationResult result;

  bool operator==(const RunLog&) const = default;
};

struct ClassPredictionStats {
  double mean_time_to_prediction = 0.0;  // seconds from arrival to t_init
  double mae_percent = 0.0;
  int converged = 0;
  int excluded = 0;

  bool operator==(const ClassPredictionStats&) const = default;
};

struct MaeSummary {
  std::map<std::string, ClassPredictionStats> per_class;
  ClassPredictionStats overall;  // mean of the class means
  std::vector<std::string> unconverged;  // "workload/data_type"

  bool operator==(const MaeSummary&) const = default;
};

// 100 |b_hat - true| / true at t_init, per class. Traces that never
// converged are excluded and listed.
MaeSummary compute_mae(std::span<const PredictionTrace> traces);

struct ControllerRow {
  std::string controller;
  std::string estimator;
  double monitoring_interval = 0.0;
  double mean_cost = 0.0;
  double mean_lb = 0.0;
  double excess_over_lb_percent = 0.0;
  int max_instances = 0;
  int ttc_met = 0;
  int workloads = 0;
  std::vector<double> seed_costs;

  bool operator==(const ControllerRow&) const = default;
};

struct EstimatorRow {
  std::string estimator;
  double monitoring_interval = 0.0;
  MaeSummary stats;

  bool operator==(const EstimatorRow&) const = default;
};

struct MetricsReport {
  std::vector<ControllerRow> controllers;
  std::vector<EstimatorRow> estimators;
  std::vector<CellKey> cells;

  bool operator==(const MetricsReport&) const = default;
};

MetricsReport build_report(std::span<const RunLog> logs);

nlohmann::json report_to_json(const MetricsReport& report);
nlohmann::json run_log_to_json(const RunLog& log);
RunLog run_log_from_json(const nlohmann::json& j);

// t_seconds,cumulative_cost,fleet_size,n_star
std::string cost_series_csv(const SimulationResult& result);

struct ExperimentOutput {
  std::vector<RunLog> logs;  // in cell order
  MetricsReport report;
};

// Runs every cell on `spec.workers` threads. Throws Error naming the cell if
// any run aborts.
ExperimentOutput run_experiment(const ExperimentSpec& spec);

// Writes summary.json, one CSV per cell under csv/ and raw logs under runs/.
void write_outputs(const ExperimentOutput& out, const std::filesystem::path& dir);
// Rebuilds the report from the raw logs written by write_outputs.
MetricsReport report_from_run_logs(const std::filesystem::path& dir);

// Longest finish - arrival under the utilization policy with the given step.
double calibrate_ttc(Scenario scenario, int as_step);

}  // namespace caas
