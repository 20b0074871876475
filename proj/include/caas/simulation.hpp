#pragma once

// Discrete-event simulation of the platform: arrivals, task execution under
// fractional service rates, synthetic measurements, instance lifecycle and
// quantum billing.

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "caas/allocation.hpp"
#include "caas/control.hpp"
#include "caas/domain.hpp"
#include "caas/estimation.hpp"

namespace caas {

/// Ground-truth per-task CUS for one data type of one workload. Task costs
/// are lognormal around a mean that follows a relative random walk.
struct TruthProfile {
  double mean_cus = 1.0;
  double task_cv = 0.3;          // coefficient of variation of a single task
  double drift_variance = 0.0;   // variance of the relative mean step per minute

  bool operator==(const TruthProfile&) const = default;
};

struct TypeSpec {
  DataTypeId data_type;
  std::int64_t items = 0;
  TruthProfile truth;

  bool operator==(const TypeSpec&) const = default;
};

struct WorkloadSpec {
  WorkloadId id;
  std::string workload_class;
  double arrival_time = 0.0;
  double requested_ttc = 7620.0;
  std::vector<TypeSpec> types;

  bool operator==(const WorkloadSpec&) const = default;
};

struct Scenario {
  std::vector<WorkloadSpec> workloads;
  double monitoring_interval = 300.0;
  double instance_startup_delay = 120.0;
  double billing_quantum = 3600.0;
  double unit_price = 0.0081;
  double measurement_variance = 0.5;  // variance of the Gaussian noise added to each measurement
  double per_workload_cap = 10.0;
  double bootstrap_rate = 1.0;
  bool work_conserving = true;  // idle CUs pull tasks from any workload with a non-zero rate
  ControllerKind controller_kind = ControllerKind::Aimd;
  ControllerConfig controller;
  EstimatorConfig estimator;
  std::uint64_t rng_seed = 1;
  std::optional<double> horizon;  // defaults to last arrival + 10x the largest TTC

  // Throws ConfigError naming the first invalid field.
  void validate() const;
  AllocationConfig allocation() const;
  double effective_horizon() const;
  bool operator==(const Scenario&) const = default;
};

struct ClassProfile {
  std::string name;
  DataTypeId data_type;
  int count = 0;
  std::int64_t min_items = 1;
  std::int64_t max_items = 1;
  double min_mean_cus = 1.0;
  double max_mean_cus = 1.0;
  double task_cv = 0.3;
  double drift_variance = 0.0;
};

struct ScheduleOptions {
  // face detection, transcoding, feature extraction, SIFT
  std::vector<ClassProfile> classes = default_classes();
  // Replace the same number of randomly sized items in the transcoding class.
  std::vector<std::int64_t> large_transcode_items = {200, 300};
  std::string large_class = "transcode";
  // Arrival slots of the large workloads; random when unset.
  std::optional<std::array<std::size_t, 2>> large_positions;
  double arrival_spacing = 300.0;
  double requested_ttc = 7620.0;

  static std::vector<ClassProfile> default_classes();
};

/// Thirty workloads from four classes, one arrival every five minutes.
Scenario generate_paper_schedule(std::uint64_t seed, const ScheduleOptions& options = {});

/// Mean of the finished tasks' CUS plus N(0, variance) noise, floored at 0.
double synthesize_measurement(std::span<const double> completed_cus, double variance, std::mt19937_64& rng);

struct CostSample {
  double t = 0.0;
  double cumulative_cost = 0.0;
  int fleet_size = 0;
  double n_star = 0.0;

  bool operator==(const CostSample&) const = default;
};

struct PredictionSample {
  double t = 0.0;
  std::optional<double> measurement;  // empty when the previous value was held
  double prediction = 0.0;
  double true_mean = 0.0;

  bool operator==(const PredictionSample&) const = default;
};

struct PredictionTrace {
  WorkloadId workload;
  DataTypeId data_type;
  std::string workload_class;
  double arrival_time = 0.0;
  std::vector<PredictionSample> samples;
  std::optional<std::size_t> t_init_index;

  bool operator==(const PredictionTrace&) const = default;
};

struct WorkloadOutcome {
  WorkloadId id;
  std::string workload_class;
  double arrival_time = 0.0;
  double finish_time = 0.0;
  double deadline = 0.0;  // confirmed deadline, or the requested one if never confirmed
  bool confirmed = false;
  std::optional<double> t_init_time;
  bool ttc_met = false;

  bool operator==(const WorkloadOutcome&) const = default;
};

struct SimulationResult {
  std::vector<CostSample> cost_series;
  std::vector<WorkloadOutcome> outcomes;
  std::vector<PredictionTrace> predictions;
  int max_instances = 0;
  double total_cost = 0.0;
  double lb = 0.0;
  double cus_consumed = 0.0;
  double end_time = 0.0;

  bool operator==(const SimulationResult&) const = default;
};

/// Event-driven engine for one scenario. Same-time events fire in the order
/// billing, task completion, arrival, monitoring.
class Engine {
 public:
  explicit Engine(Scenario scenario);
  ~Engine();
  Engine(Engine&&) noexcept;
  Engine& operator=(Engine&&) noexcept;

  double now() const noexcept;
  bool finished() const noexcept;
  // Time until the next scheduled event of any kind.
  double time_to_next_event() const;
  // Advances the clock by dt, firing every event that falls due.
  void step(double dt);
  // Runs one monitoring instant at the current time (normally driven by step).
  void monitoring_tick();
  SimulationResult run();

  const InstanceFleet& fleet() const noexcept;
  const BillingLedger& ledger() const noexcept;
  const AllocationPlan& plan() const noexcept;
  const Controller& controller() const noexcept;
  // Workloads that have arrived so far.
  std::vector<const Workload*> workloads() const;
  // Sum of the service rates tasks currently run at.
  double effective_rate_total() const;
  // Ground-truth CUS summed over completed tasks.
  double completed_ground_truth() const noexcept;
  SimulationResult result() const;

  // Test hooks.
  InstanceFleet& mutable_fleet() noexcept;
  BillingLedger& mutable_ledger() noexcept;
  void refresh_rates();
  // Overrides a workload's allocated service rate until the next monitoring instant.
  void override_service_rate(const WorkloadId& id, double rate);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

SimulationResult run(const Scenario& scenario);

}  // namespace caas
