#include "caas/allocation.hpp"

#include <algorithm>
#include <cmath>

#include "caas/error.hpp"

namespace caas {

void AllocationConfig::validate() const {
  if (!(per_workload_cap > 0.0)) throw ConfigError("per_workload_cap", "must be positive");
  if (!(alpha > 0.0)) throw ConfigError("alpha", "must be positive");
  if (!(beta > 0.0 && beta <= 1.0)) throw ConfigError("beta", "must lie in (0, 1]");
  if (!(bootstrap_rate >= 0.0)) throw ConfigError("bootstrap_rate", "must be non-negative");
}

std::string_view to_string(Regime r) {
  switch (r) {
    case Regime::Exact: return "exact";
    case Regime::Downscaled: return "downscaled";
    case Regime::Upscaled: return "upscaled";
  }
  return "unknown";
}

double optimal_rate(double required_cus, double time_to_deadline) {
  if (!(required_cus >= 0.0)) throw InputDomainError("required CUS must be non-negative");
  if (!(time_to_deadline > 0.0)) throw DeadlineExpired("time to deadline must be positive");
  return required_cus / time_to_deadline;
}

double demand_rate(const WorkloadDemand& demand, const AllocationConfig& cfg) {
  if (demand.phase == DemandPhase::Bootstrapping) return cfg.bootstrap_rate;
  if (demand.required_cus <= 0.0) return 0.0;
  if (demand.time_to_deadline <= 0.0) return cfg.per_workload_cap;
  return optimal_rate(demand.required_cus, demand.time_to_deadline);
}

double optimal_fleet(std::span<const WorkloadDemand> demands, const AllocationConfig& cfg) {
  double n_star = 0.0;
  for (const auto& d : demands) n_star += demand_rate(d, cfg);
  return n_star;
}

AllocationPlan allocate(std::span<const WorkloadDemand> demands, int n_tot, const AllocationConfig& cfg) {
  cfg.validate();
  if (n_tot < 0) throw InputDomainError("n_tot must be non-negative");
  AllocationPlan plan;
  for (const auto& d : demands) {
    const double s = demand_rate(d, cfg);
    plan.optimal[d.id] = s;
    plan.n_star += s;
  }
  const double supply = static_cast<double>(n_tot);
  if (plan.n_star > 0.0) {
    if (plan.n_star > supply + cfg.alpha) {
      plan.regime = Regime::Downscaled;
      plan.scale = (supply + cfg.alpha) / plan.n_star;
    } else if (plan.n_star < cfg.beta * supply) {
      plan.regime = Regime::Upscaled;
      plan.scale = cfg.beta * supply / plan.n_star;
    }
  }
  for (const auto& [id, s] : plan.optimal) {
    plan.rates[id] = std::min(s * plan.scale, cfg.per_workload_cap);
  }
  return plan;
}

double confirmed_ttc(double required_cus, double requested_ttc, double per_workload_cap) {
  if (!(required_cus >= 0.0)) throw InputDomainError("required CUS must be non-negative");
  if (!(per_workload_cap > 0.0)) throw ConfigError("per_workload_cap", "must be positive");
  if (required_cus == 0.0) return requested_ttc;
  if (requested_ttc > 0.0 && required_cus / requested_ttc <= per_workload_cap) return requested_ttc;
  return required_cus / per_workload_cap;
}

double confirm_ttc(Workload& w, double requested_ttc, const CusPredictions& predictions,
                   const AllocationConfig& cfg) {
  const double r = required_cus(w, predictions);
  const double ttc = confirmed_ttc(r, requested_ttc, cfg.per_workload_cap);
  w.advance_status(WorkloadStatus::Confirmed);
  return ttc;
}

}  // namespace caas
