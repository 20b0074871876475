#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <string>

#include "caas/error.hpp"
#include "caas/simulation.hpp"

namespace caas {

void Scenario::validate() const {
  if (!(monitoring_interval > 0.0)) throw ConfigError("monitoring_interval", "must be positive");
  if (!(instance_startup_delay >= 0.0)) throw ConfigError("instance_startup_delay", "must be non-negative");
  if (!(billing_quantum > 0.0)) throw ConfigError("billing_quantum", "must be positive");
  if (!(unit_price >= 0.0)) throw ConfigError("unit_price", "must be non-negative");
  if (!(measurement_variance >= 0.0)) throw ConfigError("measurement_variance", "must be non-negative");
  if (horizon && !(*horizon > 0.0)) throw ConfigError("horizon", "must be positive");
  controller.validate();
  allocation().validate();
  estimator.validate();

  std::set<WorkloadId> ids;
  double last_arrival = 0.0;
  for (const auto& w : workloads) {
    const std::string where = "workloads[" + w.id.value + "].";
    if (w.id.value.empty()) throw ConfigError("workloads.id", "must not be empty");
    if (!ids.insert(w.id).second) throw ConfigError(where + "id", "duplicate workload id");
    if (!(w.arrival_time >= last_arrival)) throw ConfigError(where + "arrival_time", "arrivals must be nondecreasing and non-negative");
    last_arrival = w.arrival_time;
    if (!(w.requested_ttc > 0.0)) throw ConfigError(where + "requested_ttc", "must be positive");
    if (w.types.empty()) throw ConfigError(where + "types", "must list at least one data type");
    std::set<DataTypeId> types;
    for (const auto& t : w.types) {
      if (!types.insert(t.data_type).second) throw ConfigError(where + "types", "duplicate data type '" + t.data_type.value + "'");
      if (t.items <= 0) throw ConfigError(where + "items", "must be positive");
      if (!(t.truth.mean_cus > 0.0)) throw ConfigError(where + "mean_cus", "must be positive");
      if (!(t.truth.task_cv >= 0.0)) throw ConfigError(where + "task_cv", "must be non-negative");
      if (!(t.truth.drift_variance >= 0.0)) throw ConfigError(where + "drift_variance", "must be non-negative");
    }
  }
}

AllocationConfig Scenario::allocation() const {
  AllocationConfig cfg;
  cfg.per_workload_cap = per_workload_cap;
  cfg.bootstrap_rate = bootstrap_rate;
  cfg.alpha = controller.alpha;
  cfg.beta = controller.beta;
  return cfg;
}

double Scenario::effective_horizon() const {
  if (horizon) return *horizon;
  double last_arrival = 0.0;
  double max_ttc = 0.0;
  for (const auto& w : workloads) {
    last_arrival = std::max(last_arrival, w.arrival_time);
    max_ttc = std::max(max_ttc, w.requested_ttc);
  }
  return last_arrival + 10.0 * max_ttc;
}

std::vector<ClassProfile> ScheduleOptions::default_classes() {
  return {
      {"face-detection", DataTypeId{"image"}, 8, 1, 1000, 3.0, 9.0, 0.35, 4e-4},
      {"transcode", DataTypeId{"video"}, 8, 1, 20, 40.0, 120.0, 0.5, 4e-4},
      {"feature-extraction", DataTypeId{"image"}, 7, 1, 1000, 1.5, 4.5, 0.35, 4e-4},
      {"sift", DataTypeId{"image"}, 7, 1, 1000, 4.0, 12.0, 0.35, 4e-4},
  };
}

Scenario generate_paper_schedule(std::uint64_t seed, const ScheduleOptions& options) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), 0x5c4edu};
  std::mt19937_64 rng(seq);

  struct Draft {
    std::string cls;
    TypeSpec type;
    bool large = false;
  };
  std::vector<Draft> drafts;
  for (const auto& c : options.classes) {
    std::uniform_int_distribution<std::int64_t> items(c.min_items, c.max_items);
    std::uniform_real_distribution<double> mean(c.min_mean_cus, c.max_mean_cus);
    const bool hosts_large = c.name == options.large_class;
    const int large = hosts_large ? static_cast<int>(options.large_transcode_items.size()) : 0;
    for (int i = 0; i < c.count; ++i) {
      Draft d;
      d.cls = c.name;
      d.type.data_type = c.data_type;
      d.type.truth = {mean(rng), c.task_cv, c.drift_variance};
      if (i < large) {
        d.type.items = options.large_transcode_items[static_cast<std::size_t>(i)];
        d.large = true;
      } else {
        d.type.items = items(rng);
      }
      drafts.push_back(std::move(d));
    }
  }

  std::vector<std::size_t> order(drafts.size());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  if (options.large_positions) {
    // Move the large workloads into the requested slots, keeping everything else in order.
    std::vector<std::size_t> large;
    std::vector<std::size_t> rest;
    for (auto idx : order) (drafts[idx].large ? large : rest).push_back(idx);
    order = rest;
    std::array<std::size_t, 2> slots = *options.large_positions;
    for (std::size_t i = 0; i < large.size() && i < slots.size(); ++i) {
      const auto pos = std::min(slots[i], order.size());
      order.insert(order.begin() + static_cast<std::ptrdiff_t>(pos), large[i]);
    }
  }

  Scenario s;
  s.rng_seed = seed;
  for (std::size_t slot = 0; slot < order.size(); ++slot) {
    const Draft& d = drafts[order[slot]];
    WorkloadSpec w;
    const std::string n = std::to_string(slot + 1);
    w.id = WorkloadId{"w" + std::string(n.size() < 2 ? 2 - n.size() : 0, '0') + n};
    w.workload_class = d.cls;
    w.arrival_time = options.arrival_spacing * static_cast<double>(slot);
    w.requested_ttc = options.requested_ttc;
    w.types.push_back(d.type);
    s.workloads.push_back(std::move(w));
  }
  return s;
}

double synthesize_measurement(std::span<const double> completed_cus, double variance, std::mt19937_64& rng) {
  if (completed_cus.empty()) throw InputDomainError("no completed tasks to measure");
  const double mean =
      std::accumulate(completed_cus.begin(), completed_cus.end(), 0.0) / static_cast<double>(completed_cus.size());
  if (variance <= 0.0) return std::max(0.0, mean);
  std::normal_distribution<double> noise(0.0, std::sqrt(variance));
  return std::max(0.0, mean + noise(rng));
}

}  // namespace caas
