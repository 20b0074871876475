#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "caas/error.hpp"
#include "caas/simulation.hpp"

namespace caas {

namespace {

constexpr double kTimeEps = 1e-7;
constexpr double kMinute = 60.0;

std::mt19937_64 make_stream(std::uint64_t seed, std::uint32_t workload, std::uint32_t type, std::uint32_t purpose) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), workload, type,
                    purpose};
  return std::mt19937_64(seq);
}

struct RunningTask {
  std::size_t type = 0;
  double ground_truth = 0.0;
  double accumulated = 0.0;
  double rate = 0.0;

  double remaining() const { return ground_truth - accumulated; }
};

struct TypeRuntime {
  TypeSpec spec;
  std::int64_t started = 0;
  std::mt19937_64 task_rng;
  std::mt19937_64 walk_rng;
  std::mt19937_64 noise_rng;
  std::vector<double> walk{0.0};  // relative mean offset per elapsed minute
  CusPredictor predictor;
  std::vector<double> interval_cus;
  double cumulative_measured = 0.0;
  std::int64_t measured_items = 0;
  PredictionTrace trace;

  TypeRuntime(TypeSpec s, const EstimatorConfig& est, double interval, std::uint64_t seed, std::uint32_t w,
              std::uint32_t k)
      : spec(std::move(s)),
        task_rng(make_stream(seed, w, k, 1)),
        walk_rng(make_stream(seed, w, k, 2)),
        noise_rng(make_stream(seed, w, k, 3)),
        predictor(est, interval) {}

  std::int64_t pending() const { return spec.items - started; }

  double mean_at(double elapsed) {
    const auto minute = static_cast<std::size_t>(std::max(0.0, std::floor(elapsed / kMinute)));
    if (spec.truth.drift_variance > 0.0) {
      std::normal_distribution<double> step(0.0, std::sqrt(spec.truth.drift_variance));
      while (walk.size() <= minute) walk.push_back(walk.back() + step(walk_rng));
    }
    const double offset = walk[std::min(minute, walk.size() - 1)];
    return spec.truth.mean_cus * std::max(0.1, 1.0 + offset);
  }

  double draw_task(double elapsed) {
    const double mean = mean_at(elapsed);
    std::normal_distribution<double> z(0.0, 1.0);
    const double draw = z(task_rng);
    if (spec.truth.task_cv <= 0.0) return mean;
    const double sigma_sq = std::log1p(spec.truth.task_cv * spec.truth.task_cv);
    return mean * std::exp(std::sqrt(sigma_sq) * draw - 0.5 * sigma_sq);
  }
};

struct WorkloadRuntime {
  WorkloadSpec spec;
  Workload workload;
  std::vector<TypeRuntime> types;
  std::vector<RunningTask> running;
  bool arrived = false;
  bool done = false;
  bool confirmed = false;
  double deadline = 0.0;
  std::optional<double> t_init_time;
  double finish_time = 0.0;
  std::size_t next_type = 0;
  std::optional<double> rate_override;

  static ItemCounts counts(const WorkloadSpec& s) {
    ItemCounts c;
    for (const auto& t : s.types) c[t.data_type] = t.items;
    return c;
  }

  WorkloadRuntime(const WorkloadSpec& s, const Scenario& sc, std::uint32_t index)
      : spec(s), workload(s.id, s.arrival_time, counts(s), s.arrival_time + s.requested_ttc) {
    deadline = s.arrival_time + s.requested_ttc;
    std::uint32_t k = 0;
    for (const auto& t : s.types) {
      types.emplace_back(t, sc.estimator, sc.monitoring_interval, sc.rng_seed, index, k++);
      auto& tr = types.back().trace;
      tr.workload = s.id;
      tr.data_type = t.data_type;
      tr.workload_class = s.workload_class;
      tr.arrival_time = s.arrival_time;
    }
  }

  bool live() const { return arrived && !done; }
  std::int64_t open_tasks() const { return workload.total_remaining(); }

  std::int64_t pending() const {
    std::int64_t p = 0;
    for (const auto& t : types) p += t.pending();
    return p;
  }

  CusPredictions predictions() const {
    CusPredictions p;
    for (const auto& t : types) {
      if (t.predictor.converged()) p[t.spec.data_type] = t.predictor.prediction();
    }
    return p;
  }

  bool all_converged() const {
    return std::all_of(types.begin(), types.end(), [](const TypeRuntime& t) { return t.predictor.converged(); });
  }
};

// Shares of `capacity` proportional to `weights`, never exceeding a
// workload's bound; what a bounded workload leaves is handed to the rest.
std::vector<double> water_fill(const std::vector<double>& bounds, const std::vector<double>& weights, double capacity) {
  std::vector<double> out(bounds.size(), 0.0);
  std::vector<std::size_t> open;
  for (std::size_t i = 0; i < bounds.size(); ++i) {
    if (bounds[i] > 0.0 && weights[i] > 0.0) open.push_back(i);
  }
  double left = capacity;
  while (!open.empty() && left > 1e-12) {
    double wsum = 0.0;
    for (auto i : open) wsum += weights[i];
    std::vector<std::size_t> next;
    bool saturated = false;
    for (auto i : open) {
      if (out[i] + left * weights[i] / wsum >= bounds[i]) saturated = true;
    }
    if (!saturated) {
      for (auto i : open) out[i] += left * weights[i] / wsum;
      break;
    }
    double used = 0.0;
    for (auto i : open) {
      if (out[i] + left * weights[i] / wsum >= bounds[i]) {
        used += bounds[i] - out[i];
        out[i] = bounds[i];
      } else {
        next.push_back(i);
      }
    }
    left -= used;
    open = std::move(next);
  }
  return out;
}

}  // namespace

struct Engine::Impl {
  Scenario scenario;
  AllocationConfig alloc;
  double now = 0.0;
  bool started = false;
  bool ended = false;
  InstanceFleet fleet;
  BillingLedger ledger;
  Controller controller;
  AllocationPlan plan;
  std::vector<WorkloadRuntime> workloads;
  std::size_t next_arrival = 0;
  double next_tick = 0.0;
  double horizon = 0.0;
  double busy_cu_seconds = 0.0;
  double capacity_cu_seconds = 0.0;
  double completed_truth = 0.0;
  std::vector<CostSample> cost_series;
  int max_instances = 0;

  explicit Impl(Scenario s)
      : scenario(std::move(s)),
        alloc(scenario.allocation()),
        fleet(scenario.billing_quantum, scenario.unit_price, scenario.instance_startup_delay),
        ledger(scenario.unit_price),
        controller(scenario.controller_kind, scenario.controller) {
    scenario.validate();
    horizon = scenario.effective_horizon();
    workloads.reserve(scenario.workloads.size());
    std::uint32_t index = 0;
    for (const auto& w : scenario.workloads) workloads.emplace_back(w, scenario, index++);
  }

  bool finished() const {
    return next_arrival == workloads.size() &&
           std::all_of(workloads.begin(), workloads.end(), [](const WorkloadRuntime& w) { return w.done; });
  }

  double time_to_next_event() const {
    double next = std::numeric_limits<double>::infinity();
    next = std::min(next, fleet.time_to_next_event());
    next = std::min(next, next_tick - now);
    if (next_arrival < workloads.size()) next = std::min(next, workloads[next_arrival].spec.arrival_time - now);
    for (const auto& w : workloads) {
      for (const auto& t : w.running) {
        if (t.rate > 0.0) next = std::min(next, t.remaining() / t.rate);
      }
    }
    return std::max(0.0, next);
  }

  void snap_clock() {
    if (std::abs(now - next_tick) <= kTimeEps) now = next_tick;
    if (next_arrival < workloads.size()) {
      const double a = workloads[next_arrival].spec.arrival_time;
      if (std::abs(now - a) <= kTimeEps) now = a;
    }
  }

  void advance(double dt) {
    if (!(dt >= 0.0) || !std::isfinite(dt)) throw EngineFault("engine advanced by invalid dt");
    for (auto& w : workloads) {
      for (auto& t : w.running) {
        t.accumulated = std::min(t.ground_truth, t.accumulated + t.rate * dt);
        busy_cu_seconds += t.rate * dt;
      }
    }
    capacity_cu_seconds += static_cast<double>(fleet.active_cus()) * dt;
    now += dt;
    snap_clock();
    fleet.advance(dt, ledger);
  }

  void process_completions() {
    for (auto& w : workloads) {
      if (!w.live()) continue;
      auto& run = w.running;
      for (auto it = run.begin(); it != run.end();) {
        if (it->remaining() > 1e-9 * std::max(1.0, it->ground_truth)) {
          ++it;
          continue;
        }
        it->accumulated = it->ground_truth;
        auto& type = w.types[it->type];
        type.interval_cus.push_back(it->ground_truth);
        completed_truth += it->ground_truth;
        ledger.record_consumed(it->ground_truth);
        w.workload.complete_items(type.spec.data_type);
        it = run.erase(it);
      }
      if (w.open_tasks() == 0) {
        w.done = true;
        w.finish_time = now;
        w.workload.advance_status(WorkloadStatus::Completed);
      }
    }
  }

  void process_arrivals() {
    while (next_arrival < workloads.size() && workloads[next_arrival].spec.arrival_time <= now + kTimeEps) {
      workloads[next_arrival].arrived = true;
      ++next_arrival;
    }
  }

  void record_sample(double n_star) {
    CostSample s{now, ledger.total_cost(), fleet.live_count(), n_star};
    if (!cost_series.empty() && cost_series.back().t >= now) {
      cost_series.back() = s;
    } else {
      cost_series.push_back(s);
    }
  }

  void finalize() {
    if (ended) return;
    fleet.terminate_all();
    record_sample(0.0);
    ended = true;
  }

  void observe_all() {
    for (auto& w : workloads) {
      if (!w.live()) continue;
      for (auto& type : w.types) {
        std::optional<double> measurement;
        if (!type.interval_cus.empty()) {
          const double m = synthesize_measurement(type.interval_cus, scenario.measurement_variance, type.noise_rng);
          const auto count = static_cast<std::int64_t>(type.interval_cus.size());
          type.cumulative_measured += m * static_cast<double>(count);
          type.measured_items += count;
          type.predictor.observe({m, type.cumulative_measured / static_cast<double>(type.measured_items)});
          measurement = m;
        } else {
          type.predictor.hold();
        }
        type.interval_cus.clear();
        if (!type.predictor.initialized()) continue;
        type.trace.samples.push_back(
            {now, measurement, type.predictor.prediction(), type.mean_at(now - w.spec.arrival_time)});
        if (type.predictor.converged() && !type.trace.t_init_index) {
          type.trace.t_init_index = type.predictor.status().t_init;
        }
      }
    }
  }

  void confirm_converged() {
    for (auto& w : workloads) {
      if (!w.live() || w.confirmed || !w.all_converged()) continue;
      const double requested = w.spec.arrival_time + w.spec.requested_ttc - now;
      const double ttc = confirm_ttc(w.workload, requested, w.predictions(), alloc);
      w.deadline = now + ttc;
      w.workload.set_ttc_deadline(w.deadline);
      w.confirmed = true;
      w.t_init_time = now;
    }
  }

  void allocate_rates() {
    std::vector<WorkloadDemand> demands;
    for (auto& w : workloads) {
      if (!w.live()) continue;
      WorkloadDemand d;
      d.id = w.spec.id;
      if (w.confirmed) {
        d.phase = DemandPhase::Confirmed;
        d.required_cus = required_cus(w.workload, w.predictions());
        d.time_to_deadline = w.deadline - now;
      } else {
        d.phase = DemandPhase::Bootstrapping;
      }
      demands.push_back(std::move(d));
    }
    plan = allocate(demands, fleet.active_cus(), alloc);
    for (auto& w : workloads) {
      w.rate_override.reset();
      if (!w.live()) continue;
      w.workload.set_service_rate(plan.rates.at(w.spec.id), alloc.per_workload_cap);
    }
  }

  void actuate(int target) {
    const int live = fleet.live_count();
    if (target > live) {
      for (int i = live; i < target; ++i) fleet.launch(ledger);
    } else if (target < live) {
      for (const auto& id : select_terminations(fleet, live - target).ids) fleet.terminate(id);
    }
    max_instances = std::max(max_instances, fleet.live_count());
  }

  void monitoring_tick() {
    observe_all();
    confirm_converged();
    allocate_rates();
    int target = controller.target_instances();
    if (controller.wants_decision(now)) {
      const double util = capacity_cu_seconds > 0.0 ? busy_cu_seconds / capacity_cu_seconds : 0.0;
      target = controller.step({now, plan.n_star, std::clamp(util, 0.0, 1.0)});
      busy_cu_seconds = 0.0;
      capacity_cu_seconds = 0.0;
    }
    actuate(target);
    record_sample(plan.n_star);
  }

  void refresh_rates() {
    const double capacity = static_cast<double>(fleet.active_cus());
    std::vector<WorkloadRuntime*> live;
    for (auto& w : workloads) {
      if (w.live()) live.push_back(&w);
    }
    std::vector<double> usable(live.size(), 0.0);
    // Platform controllers never run a workload past the cap or its open task count.
    auto bound = [&](const WorkloadRuntime& w) {
      return std::min(static_cast<double>(w.open_tasks()), alloc.per_workload_cap);
    };
    if (scenario.controller_kind == ControllerKind::UtilizationAs) {
      // One shared queue served in arrival order; no rates, no per-workload cap.
      double left = capacity;
      for (std::size_t i = 0; i < live.size(); ++i) {
        usable[i] = std::min(left, static_cast<double>(live[i]->open_tasks()));
        left -= usable[i];
      }
    } else if (scenario.work_conserving) {
      std::vector<double> bounds;
      std::vector<double> weights;
      for (auto* w : live) {
        bounds.push_back(bound(*w));
        weights.push_back(w->rate_override.value_or(w->workload.service_rate()));
      }
      usable = water_fill(bounds, weights, capacity);
    } else {
      for (std::size_t i = 0; i < live.size(); ++i) {
        const double wanted = live[i]->rate_override.value_or(live[i]->workload.service_rate());
        usable[i] = std::min(wanted, static_cast<double>(live[i]->open_tasks()));
      }
    }
    double sum = 0.0;
    for (double u : usable) sum += u;
    const double scale = sum > capacity ? (sum > 0.0 ? capacity / sum : 0.0) : 1.0;

    for (std::size_t i = 0; i < live.size(); ++i) {
      auto& w = *live[i];
      const double rate = usable[i] * scale;
      if (rate > 1e-12) {
        const auto want = std::min<std::int64_t>(w.open_tasks(),
                                                 std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(rate - 1e-9))));
        while (static_cast<std::int64_t>(w.running.size()) < want && w.pending() > 0) start_task(w);
      }
      const double per_task = w.running.empty() ? 0.0 : std::min(1.0, rate / static_cast<double>(w.running.size()));
      for (auto& t : w.running) t.rate = per_task;
    }
  }

  void start_task(WorkloadRuntime& w) {
    for (std::size_t probe = 0; probe < w.types.size(); ++probe) {
      const std::size_t k = (w.next_type + probe) % w.types.size();
      auto& type = w.types[k];
      if (type.pending() <= 0) continue;
      RunningTask t;
      t.type = k;
      t.ground_truth = type.draw_task(now - w.spec.arrival_time);
      ++type.started;
      w.running.push_back(t);
      w.next_type = (k + 1) % w.types.size();
      return;
    }
  }

  void fire_due_events() {
    process_completions();
    if (finished()) {
      finalize();
      return;
    }
    process_arrivals();
    if (now >= next_tick - kTimeEps) {
      monitoring_tick();
      next_tick += scenario.monitoring_interval;
    }
    refresh_rates();
    if (now > horizon) {
      std::ostringstream msg;
      int open = 0;
      for (const auto& w : workloads) open += w.done ? 0 : 1;
      msg << "simulation exceeded its horizon of " << horizon << " s with " << open << " workloads unfinished";
      throw EngineFault(msg.str());
    }
  }

  void start() {
    if (started) return;
    started = true;
    if (finished()) {
      finalize();
      return;
    }
    fire_due_events();
  }

  SimulationResult result() const {
    SimulationResult r;
    r.cost_series = cost_series;
    r.max_instances = max_instances;
    r.total_cost = ledger.total_cost();
    r.lb = lb_cost(ledger, fleet);
    r.cus_consumed = ledger.cus_consumed();
    r.end_time = now;
    for (const auto& w : workloads) {
      WorkloadOutcome o;
      o.id = w.spec.id;
      o.workload_class = w.spec.workload_class;
      o.arrival_time = w.spec.arrival_time;
      o.finish_time = w.finish_time;
      o.deadline = w.deadline;
      o.confirmed = w.confirmed;
      o.t_init_time = w.t_init_time;
      o.ttc_met = w.done && w.finish_time <= w.deadline + 1e-6;
      r.outcomes.push_back(std::move(o));
      for (const auto& t : w.types) {
        if (!t.trace.samples.empty()) r.predictions.push_back(t.trace);
      }
    }
    return r;
  }
};

Engine::Engine(Scenario scenario) : impl_(std::make_unique<Impl>(std::move(scenario))) {}
Engine::~Engine() = default;
Engine::Engine(Engine&&) noexcept = default;
Engine& Engine::operator=(Engine&&) noexcept = default;

double Engine::now() const noexcept { return impl_->now; }
bool Engine::finished() const noexcept { return impl_->ended; }

double Engine::time_to_next_event() const { return impl_->time_to_next_event(); }

void Engine::step(double dt) {
  if (dt < 0.0) throw EngineFault("negative dt");
  impl_->start();
  if (impl_->ended) return;
  impl_->advance(dt);
  impl_->fire_due_events();
}

void Engine::monitoring_tick() {
  impl_->monitoring_tick();
  impl_->refresh_rates();
}

SimulationResult Engine::run() {
  impl_->start();
  while (!impl_->ended) {
    impl_->advance(impl_->time_to_next_event());
    impl_->fire_due_events();
  }
  return impl_->result();
}

const InstanceFleet& Engine::fleet() const noexcept { return impl_->fleet; }
const BillingLedger& Engine::ledger() const noexcept { return impl_->ledger; }
const AllocationPlan& Engine::plan() const noexcept { return impl_->plan; }
const Controller& Engine::controller() const noexcept { return impl_->controller; }

std::vector<const Workload*> Engine::workloads() const {
  std::vector<const Workload*> out;
  for (const auto& w : impl_->workloads) {
    if (w.arrived) out.push_back(&w.workload);
  }
  return out;
}

double Engine::effective_rate_total() const {
  double total = 0.0;
  for (const auto& w : impl_->workloads) {
    for (const auto& t : w.running) total += t.rate;
  }
  return total;
}

double Engine::completed_ground_truth() const noexcept { return impl_->completed_truth; }
SimulationResult Engine::result() const { return impl_->result(); }
InstanceFleet& Engine::mutable_fleet() noexcept { return impl_->fleet; }
BillingLedger& Engine::mutable_ledger() noexcept { return impl_->ledger; }
void Engine::refresh_rates() { impl_->refresh_rates(); }

void Engine::override_service_rate(const WorkloadId& id, double rate) {
  for (auto& w : impl_->workloads) {
    if (w.spec.id == id) w.rate_override = rate;
  }
  impl_->refresh_rates();
}

SimulationResult run(const Scenario& scenario) { return Engine(scenario).run(); }

}  // namespace caas
