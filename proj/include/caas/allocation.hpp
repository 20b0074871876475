#pragma once

// Proportional-fair service rates, TTC confirmation and the optimal fleet size.

#include <map>
#include <span>
#include <string_view>

#include "caas/domain.hpp"

namespace caas {

struct AllocationConfig {
  double per_workload_cap = 10.0;  // N_w,max
  double alpha = 5.0;
  double beta = 0.9;
  double bootstrap_rate = 1.0;  // CUs given to workloads that have no confirmed TTC yet

  void validate() const;
};

enum class Regime { Exact, Downscaled, Upscaled };

std::string_view to_string(Regime r);

enum class DemandPhase { Bootstrapping, Confirmed };

/// What the allocator needs to know about one live workload at an instant.
struct WorkloadDemand {
  WorkloadId id;
  DemandPhase phase = DemandPhase::Confirmed;
  double required_cus = 0.0;      // r_w, ignored while bootstrapping
  double time_to_deadline = 0.0;  // d_w, seconds from now
};

struct AllocationPlan {
  std::map<WorkloadId, double> rates;    // after scaling and per-workload clamping
  std::map<WorkloadId, double> optimal;  // s*_w before scaling
  double n_star = 0.0;
  double scale = 1.0;  // factor applied to every s*_w before clamping
  Regime regime = Regime::Exact;
};

/// Maximizer of r ln(s) - d s. Throws DeadlineExpired for d <= 0.
double optimal_rate(double required_cus, double time_to_deadline);

// s*_w for one demand: r/d when confirmed, the bootstrap rate while
// bootstrapping, and the per-workload cap once the deadline has passed.
double demand_rate(const WorkloadDemand& demand, const AllocationConfig& cfg);

double optimal_fleet(std::span<const WorkloadDemand> demands, const AllocationConfig& cfg);

AllocationPlan allocate(std::span<const WorkloadDemand> demands, int n_tot, const AllocationConfig& cfg);

/// TTC to confirm given the remaining required CUS: the requested value when
/// the resulting optimal rate fits under the cap, otherwise the smallest
/// extension that brings the rate down to the cap.
double confirmed_ttc(double required_cus, double requested_ttc, double per_workload_cap);

/// Confirms `w`'s TTC from converged per-item predictions and moves it to
/// Confirmed. Throws EstimatorNotReady if a remaining data type has no
/// prediction yet.
double confirm_ttc(Workload& w, double requested_ttc, const CusPredictions& predictions,
                   const AllocationConfig& cfg);

}  // namespace caas
