#pragma once

// Per-(workload, data type) CUS predictors and convergence detection.

#include <cstddef>
#include <deque>
#include <optional>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

namespace caas {

/// Scalar Kalman filter for a random-walk CUS with white measurement noise.
///
/// The gain step uses the measurement held from the previous monitoring
/// instant, so `previous_measurement` must be set (by `initial`) before the
/// first update.
struct KalmanState {
  double b_hat = 0.0;
  double pi = 0.0;
  double pi_minus = 0.0;
  double kappa = 0.0;
  double sigma_z_sq = 0.5;
  double sigma_v_sq = 0.5;
  int update_count = 0;
  std::optional<double> previous_measurement;

  static KalmanState initial(double first_measurement, double sigma_z_sq = 0.5, double sigma_v_sq = 0.5);
};

struct AdHocState {
  double b_hat = 0.0;
  double kappa_fixed = 0.1;
  std::optional<double> previous_measurement;

  static AdHocState initial(double first_measurement, double kappa_fixed = 0.1);
};

/// Second-order weighted moving average over normalized measurements.
struct ArmaState {
  std::deque<double> history;  // newest first, at most three entries
  double delta = 0.8;
  double gamma = 0.15;
  std::deque<double> prediction_window;  // newest last
  std::size_t window_capacity = 3;

  // Throws ConfigError unless delta + gamma <= 1.
  static ArmaState make(double delta, double gamma, std::size_t window_capacity = 3);
};

template <class State>
struct Update {
  State state;
  double prediction;
};

Update<KalmanState> kalman_update(KalmanState state, double measurement);
Update<AdHocState> adhoc_update(AdHocState state, double measurement);
Update<ArmaState> arma_update(ArmaState state, double b_norm_new);

struct ConvergenceStatus {
  bool converged = false;
  std::optional<std::size_t> t_init;

  bool operator==(const ConvergenceStatus&) const = default;
};

// First strict decrease of the prediction series.
ConvergenceStatus detect_convergence_slope(std::span<const double> predictions);
// First instant whose trailing window stays within threshold * mean of the window mean.
ConvergenceStatus detect_convergence_window(std::span<const double> predictions, std::size_t window,
                                            double threshold);

enum class EstimatorKind { Kalman, AdHoc, Arma };

std::string_view to_string(EstimatorKind kind);
EstimatorKind estimator_kind_from_string(std::string_view name);

struct EstimatorConfig {
  EstimatorKind kind = EstimatorKind::Kalman;
  double sigma_z_sq = 0.5;
  double sigma_v_sq = 0.5;
  double adhoc_gain = 0.1;
  double arma_delta = 0.8;
  double arma_gamma = 0.15;
  std::size_t window = 0;  // 0 selects by monitoring interval: 10 at 1 min, 3 otherwise
  double threshold = 0.20;

  void validate() const;
  std::size_t window_for(double monitoring_interval) const;
  bool operator==(const EstimatorConfig&) const = default;
};

/// One monitoring instant's input for a (workload, data type) pair.
struct Observation {
  double interval_mean;  // mean measured CUS of tasks finished in the interval
  double per_item_mean;  // cumulative measured CUS over items finished so far
};

/// Runs one estimator variant on a pair and tracks its convergence.
///
/// The first observation initializes the estimator; afterwards it is stepped
/// once per monitoring instant, with `hold()` repeating the last measurement
/// when nothing finished during the interval.
class CusPredictor {
 public:
  CusPredictor(const EstimatorConfig& cfg, double monitoring_interval);

  void observe(const Observation& obs);
  void hold();

  bool initialized() const noexcept { return initialized_; }
  bool converged() const noexcept { return status_.converged; }
  const ConvergenceStatus& status() const noexcept { return status_; }
  double prediction() const noexcept { return series_.empty() ? 0.0 : series_.back(); }
  const std::vector<double>& series() const noexcept { return series_; }
  EstimatorKind kind() const noexcept { return kind_; }

 private:
  void step(const Observation& obs);
  void push(double prediction);

  EstimatorKind kind_;
  std::size_t window_;
  double threshold_;
  std::variant<KalmanState, AdHocState, ArmaState> state_;
  EstimatorConfig cfg_;
  bool initialized_ = false;
  Observation last_{};
  std::vector<double> series_;
  ConvergenceStatus status_;
};

}  // namespace caas
