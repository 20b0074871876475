#include "caas/control.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "caas/error.hpp"

namespace caas {

std::string_view to_string(ControllerKind kind) {
  switch (kind) {
    case ControllerKind::Aimd: return "aimd";
    case ControllerKind::Reactive: return "reactive";
    case ControllerKind::Mwa: return "mwa";
    case ControllerKind::Lr: return "lr";
    case ControllerKind::UtilizationAs: return "as";
  }
  return "unknown";
}

ControllerKind controller_kind_from_string(std::string_view name) {
  if (name == "aimd") return ControllerKind::Aimd;
  if (name == "reactive") return ControllerKind::Reactive;
  if (name == "mwa") return ControllerKind::Mwa;
  if (name == "lr") return ControllerKind::Lr;
  if (name == "as") return ControllerKind::UtilizationAs;
  throw ConfigError("controller", "unknown variant '" + std::string(name) + "'");
}

void ControllerConfig::validate() const {
  if (!(alpha > 0.0)) throw ConfigError("alpha", "must be positive");
  if (!(beta > 0.0 && beta <= 1.0)) throw ConfigError("beta", "must lie in (0, 1]");
  if (n_min < 0) throw ConfigError("n_min", "must be non-negative");
  if (n_min > n_max) throw ConfigError("n_max", "must not be below n_min");
  if (history_len < 1) throw ConfigError("history_len", "must be at least 1");
  if (!(as_utilization_threshold >= 0.0 && as_utilization_threshold <= 1.0)) {
    throw ConfigError("as_utilization_threshold", "must lie in [0, 1]");
  }
  if (as_step < 1) throw ConfigError("as_step", "must be at least 1");
  if (!(as_interval > 0.0)) throw ConfigError("as_interval", "must be positive");
}

double clamp_to_bounds(double n, const ControllerConfig& cfg) {
  return std::clamp(n, static_cast<double>(cfg.n_min), static_cast<double>(cfg.n_max));
}

double aimd_step(double n_tot, double n_star, const ControllerConfig& cfg) {
  if (n_tot <= n_star) return std::min(n_tot + cfg.alpha, static_cast<double>(cfg.n_max));
  return std::max(cfg.beta * n_tot, static_cast<double>(cfg.n_min));
}

double reactive_step(double n_star, const ControllerConfig& cfg) { return clamp_to_bounds(n_star, cfg); }

double mwa_step(std::span<const double> history, const ControllerConfig& cfg) {
  if (history.empty()) return cfg.n_min;
  return std::accumulate(history.begin(), history.end(), 0.0) / static_cast<double>(history.size());
}

double lr_step(std::span<const double> history, const ControllerConfig& cfg) {
  if (history.size() < 2) return reactive_step(history.empty() ? 0.0 : history.back(), cfg);
  const double n = static_cast<double>(history.size());
  const double x_mean = (n - 1.0) / 2.0;
  const double y_mean = std::accumulate(history.begin(), history.end(), 0.0) / n;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < history.size(); ++i) {
    const double dx = static_cast<double>(i) - x_mean;
    sxy += dx * (history[i] - y_mean);
    sxx += dx * dx;
  }
  const double slope = sxy / sxx;
  return clamp_to_bounds(y_mean + slope * (n - x_mean), cfg);
}

int utilization_as_step(double avg_utilization, int n_instances, const ControllerConfig& cfg) {
  if (avg_utilization > cfg.as_utilization_threshold) return std::min(n_instances + cfg.as_step, cfg.n_max);
  return std::max(n_instances - cfg.as_step, cfg.n_min);
}

TerminationSelection select_terminations(const InstanceFleet& fleet, int count) {
  std::vector<const InstanceRecord*> active;
  for (const auto& r : fleet.instances()) {
    if (r.state == InstanceState::Active) active.push_back(&r);
  }
  std::sort(active.begin(), active.end(), [](const InstanceRecord* a, const InstanceRecord* b) {
    if (a->remaining_prepaid != b->remaining_prepaid) return a->remaining_prepaid < b->remaining_prepaid;
    return a->instance_id < b->instance_id;
  });
  TerminationSelection out;
  const int take = std::clamp(count, 0, static_cast<int>(active.size()));
  out.shortfall = std::max(0, count - take);
  for (int i = 0; i < take; ++i) out.ids.push_back(active[static_cast<std::size_t>(i)]->instance_id);
  return out;
}

Controller::Controller(ControllerKind kind, const ControllerConfig& cfg) : cfg_(cfg) {
  cfg_.validate();
  state_.variant = kind;
  state_.n_target = cfg_.n_min;
}

bool Controller::wants_decision(double now) const {
  if (state_.variant != ControllerKind::UtilizationAs || !last_decision_) return true;
  return now - *last_decision_ >= cfg_.as_interval - 1e-6;
}

void Controller::remember(double sample) {
  state_.history.push_back(sample);
  while (state_.history.size() > static_cast<std::size_t>(cfg_.history_len)) state_.history.pop_front();
}

int Controller::step(const ControlInput& in) {
  last_decision_ = in.now;
  switch (state_.variant) {
    case ControllerKind::Aimd:
      state_.n_target = aimd_step(state_.n_target, in.n_star, cfg_);
      break;
    case ControllerKind::Reactive:
      state_.n_target = reactive_step(in.n_star, cfg_);
      break;
    case ControllerKind::Mwa: {
      remember(in.n_star);
      const std::vector<double> h(state_.history.begin(), state_.history.end());
      state_.n_target = clamp_to_bounds(mwa_step(h, cfg_), cfg_);
      break;
    }
    case ControllerKind::Lr: {
      remember(in.n_star);
      const std::vector<double> h(state_.history.begin(), state_.history.end());
      state_.n_target = lr_step(h, cfg_);
      break;
    }
    case ControllerKind::UtilizationAs:
      remember(in.avg_utilization);
      state_.n_target = utilization_as_step(in.avg_utilization, static_cast<int>(state_.n_target), cfg_);
      break;
  }
  return target_instances();
}

int Controller::target_instances() const {
  // Fractional targets round up.
  return static_cast<int>(std::ceil(state_.n_target - 1e-9));
}

}  // namespace caas
