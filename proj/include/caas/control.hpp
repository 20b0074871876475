#pragma once

// Fleet-size controllers and instance termination selection.

#include <deque>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "caas/domain.hpp"

namespace caas {

enum class ControllerKind { Aimd, Reactive, Mwa, Lr, UtilizationAs };

std::string_view to_string(ControllerKind kind);
ControllerKind controller_kind_from_string(std::string_view name);

struct ControllerConfig {
  double alpha = 5.0;
  double beta = 0.9;
  int n_min = 10;
  int n_max = 100;
  int history_len = 6;
  double as_utilization_threshold = 0.20;
  int as_step = 1;
  double as_interval = 300.0;  // seconds between utilization-policy decisions

  void validate() const;
  bool operator==(const ControllerConfig&) const = default;
};

double clamp_to_bounds(double n, const ControllerConfig& cfg);

// One AIMD iteration: add alpha while supply does not exceed demand,
// otherwise shrink by beta, within [n_min, n_max].
double aimd_step(double n_tot, double n_star, const ControllerConfig& cfg);
double reactive_step(double n_star, const ControllerConfig& cfg);
// Mean of the given N* history (unclamped); n_min when empty.
double mwa_step(std::span<const double> history, const ControllerConfig& cfg);
// Least-squares line over the history (oldest first) evaluated one step
// ahead, clamped. Falls back to reactive_step with fewer than two points.
double lr_step(std::span<const double> history, const ControllerConfig& cfg);
int utilization_as_step(double avg_utilization, int n_instances, const ControllerConfig& cfg);

struct TerminationSelection {
  std::vector<InstanceId> ids;
  int shortfall = 0;  // requested terminations beyond the Active population
};

/// Active instances with the least prepaid time left, ties by id.
TerminationSelection select_terminations(const InstanceFleet& fleet, int count);

struct ControllerState {
  ControllerKind variant = ControllerKind::Aimd;
  double n_target = 0.0;
  std::deque<double> history;  // N* samples, or utilization samples for the AS policy
};

struct ControlInput {
  double now = 0.0;
  double n_star = 0.0;
  double avg_utilization = 0.0;  // busy fraction of Active CUs since the last decision
};

class Controller {
 public:
  Controller(ControllerKind kind, const ControllerConfig& cfg);

  // The utilization policy only decides every as_interval seconds.
  bool wants_decision(double now) const;
  // Updates the target and returns the number of instances to provision.
  int step(const ControlInput& in);

  int target_instances() const;
  const ControllerState& state() const noexcept { return state_; }
  const ControllerConfig& config() const noexcept { return cfg_; }
  ControllerKind kind() const noexcept { return state_.variant; }

 private:
  void remember(double sample);

  ControllerConfig cfg_;
  ControllerState state_;
  std::optional<double> last_decision_;
};

}  // namespace caas
