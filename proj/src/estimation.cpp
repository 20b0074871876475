#include "caas/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <type_traits>

#include "caas/error.hpp"

namespace caas {

namespace {

void require_measurement(double m) {
  if (!(m >= 0.0) || !std::isfinite(m)) throw InputDomainError("CUS measurement must be finite and non-negative");
}

bool window_converged_at(std::span<const double> p, std::size_t end, std::size_t window, double threshold) {
  if (end + 1 < window) return false;
  const auto first = p.begin() + static_cast<std::ptrdiff_t>(end + 1 - window);
  const auto last = p.begin() + static_cast<std::ptrdiff_t>(end + 1);
  const double mean = std::accumulate(first, last, 0.0) / static_cast<double>(window);
  if (!(mean > 0.0)) return false;
  return std::all_of(first, last, [&](double v) { return std::abs(v - mean) <= threshold * mean; });
}

}  // namespace

KalmanState KalmanState::initial(double first_measurement, double sigma_z_sq, double sigma_v_sq) {
  require_measurement(first_measurement);
  if (!(sigma_z_sq >= 0.0)) throw ConfigError("sigma_z_sq", "must be non-negative");
  if (!(sigma_v_sq >= 0.0)) throw ConfigError("sigma_v_sq", "must be non-negative");
  KalmanState s;
  s.sigma_z_sq = sigma_z_sq;
  s.sigma_v_sq = sigma_v_sq;
  s.previous_measurement = first_measurement;
  return s;
}

Update<KalmanState> kalman_update(KalmanState s, double measurement) {
  require_measurement(measurement);
  const double held = s.previous_measurement.value_or(measurement);
  s.pi_minus = s.pi + s.sigma_z_sq;
  const double denom = s.pi_minus + s.sigma_v_sq;
  s.kappa = denom > 0.0 ? s.pi_minus / denom : 0.0;
  s.b_hat += s.kappa * (held - s.b_hat);
  s.pi = (1.0 - s.kappa) * s.pi_minus;
  s.previous_measurement = measurement;
  ++s.update_count;
  return {s, s.b_hat};
}

AdHocState AdHocState::initial(double first_measurement, double kappa_fixed) {
  require_measurement(first_measurement);
  if (!(kappa_fixed > 0.0 && kappa_fixed <= 1.0)) throw ConfigError("adhoc_gain", "must lie in (0, 1]");
  AdHocState s;
  s.kappa_fixed = kappa_fixed;
  s.previous_measurement = first_measurement;
  return s;
}

Update<AdHocState> adhoc_update(AdHocState s, double measurement) {
  require_measurement(measurement);
  const double held = s.previous_measurement.value_or(measurement);
  s.b_hat += s.kappa_fixed * (held - s.b_hat);
  s.previous_measurement = measurement;
  return {s, s.b_hat};
}

ArmaState ArmaState::make(double delta, double gamma, std::size_t window_capacity) {
  if (!std::isfinite(delta) || !std::isfinite(gamma)) throw ConfigError("arma_delta", "must be finite");
  if (delta + gamma > 1.0 + 1e-12) throw ConfigError("arma_delta", "delta + gamma must not exceed 1");
  if (window_capacity < 2) throw ConfigError("window", "must be at least 2");
  ArmaState s;
  s.delta = delta;
  s.gamma = gamma;
  s.window_capacity = window_capacity;
  return s;
}

Update<ArmaState> arma_update(ArmaState s, double b_norm_new) {
  require_measurement(b_norm_new);
  s.history.push_front(b_norm_new);
  if (s.history.size() > 3) s.history.pop_back();
  double prediction = b_norm_new;
  if (s.history.size() == 3) {
    prediction = s.delta * s.history[0] + s.gamma * s.history[1] + (1.0 - s.delta - s.gamma) * s.history[2];
  }
  s.prediction_window.push_back(prediction);
  while (s.prediction_window.size() > s.window_capacity) s.prediction_window.pop_front();
  return {s, prediction};
}

ConvergenceStatus detect_convergence_slope(std::span<const double> p) {
  for (std::size_t t = 1; t < p.size(); ++t) {
    if (p[t] < p[t - 1]) return {true, t};
  }
  return {};
}

ConvergenceStatus detect_convergence_window(std::span<const double> p, std::size_t window, double threshold) {
  if (window < 2) throw ConfigError("window", "must be at least 2");
  if (!(threshold > 0.0 && threshold < 1.0)) throw ConfigError("threshold", "must lie in (0, 1)");
  for (std::size_t t = 0; t < p.size(); ++t) {
    if (window_converged_at(p, t, window, threshold)) return {true, t};
  }
  return {};
}

std::string_view to_string(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::Kalman: return "kalman";
    case EstimatorKind::AdHoc: return "adhoc";
    case EstimatorKind::Arma: return "arma";
  }
  return "unknown";
}

EstimatorKind estimator_kind_from_string(std::string_view name) {
  if (name == "kalman") return EstimatorKind::Kalman;
  if (name == "adhoc") return EstimatorKind::AdHoc;
  if (name == "arma") return EstimatorKind::Arma;
  throw ConfigError("estimator", "unknown variant '" + std::string(name) + "'");
}

void EstimatorConfig::validate() const {
  if (!(sigma_z_sq >= 0.0)) throw ConfigError("sigma_z_sq", "must be non-negative");
  if (!(sigma_v_sq >= 0.0)) throw ConfigError("sigma_v_sq", "must be non-negative");
  if (!(adhoc_gain > 0.0 && adhoc_gain <= 1.0)) throw ConfigError("adhoc_gain", "must lie in (0, 1]");
  if (arma_delta + arma_gamma > 1.0 + 1e-12) throw ConfigError("arma_delta", "delta + gamma must not exceed 1");
  if (window == 1) throw ConfigError("window", "must be 0 (automatic) or at least 2");
  if (!(threshold > 0.0 && threshold < 1.0)) throw ConfigError("threshold", "must lie in (0, 1)");
}

std::size_t EstimatorConfig::window_for(double monitoring_interval) const {
  if (window != 0) return window;
  return monitoring_interval <= 60.0 ? 10 : 3;
}

CusPredictor::CusPredictor(const EstimatorConfig& cfg, double monitoring_interval)
    : kind_(cfg.kind), window_(cfg.window_for(monitoring_interval)), threshold_(cfg.threshold), cfg_(cfg) {
  cfg.validate();
}

void CusPredictor::push(double prediction) {
  series_.push_back(prediction);
  if (status_.converged) return;
  const std::size_t t = series_.size() - 1;
  if (kind_ == EstimatorKind::Arma) {
    if (window_converged_at(series_, t, window_, threshold_)) status_ = {true, t};
  } else if (t > 0 && series_[t] < series_[t - 1]) {
    status_ = {true, t};
  }
}

void CusPredictor::step(const Observation& obs) {
  std::visit(
      [&](auto& s) {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, KalmanState>) {
          auto u = kalman_update(s, obs.interval_mean);
          s = u.state;
          push(u.prediction);
        } else if constexpr (std::is_same_v<S, AdHocState>) {
          auto u = adhoc_update(s, obs.interval_mean);
          s = u.state;
          push(u.prediction);
        } else {
          auto u = arma_update(s, obs.per_item_mean);
          s = std::move(u.state);
          push(u.prediction);
        }
      },
      state_);
}

void CusPredictor::observe(const Observation& obs) {
  require_measurement(obs.interval_mean);
  require_measurement(obs.per_item_mean);
  last_ = obs;
  if (initialized_) {
    step(obs);
    return;
  }
  initialized_ = true;
  switch (kind_) {
    case EstimatorKind::Kalman:
      state_ = KalmanState::initial(obs.interval_mean, cfg_.sigma_z_sq, cfg_.sigma_v_sq);
      push(0.0);
      break;
    case EstimatorKind::AdHoc:
      state_ = AdHocState::initial(obs.interval_mean, cfg_.adhoc_gain);
      push(0.0);
      break;
    case EstimatorKind::Arma:
      state_ = ArmaState::make(cfg_.arma_delta, cfg_.arma_gamma, window_);
      step(obs);
      break;
  }
}

void CusPredictor::hold() {
  if (initialized_) step(last_);
}

}  // namespace caas
