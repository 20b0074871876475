#include <cmath>
#include <random>
#include <vector>

#include "caas/error.hpp"
#include "caas/estimation.hpp"
#include "doctest.h"

using namespace caas;

namespace {

double arma_predict(double delta, double gamma, std::vector<double> oldest_first) {
  auto s = ArmaState::make(delta, gamma);
  double p = 0.0;
  for (double v : oldest_first) {
    auto u = arma_update(s, v);
    s = u.state;
    p = u.prediction;
  }
  return p;
}

}  // namespace

TEST_CASE("first Kalman update from the stated initialization") {
  auto s = KalmanState::initial(4.0);
  CHECK(s.b_hat == 0.0);
  CHECK(s.pi == 0.0);
  const auto u = kalman_update(s, 4.0);
  CHECK(u.state.pi_minus == doctest::Approx(0.5));
  CHECK(u.state.kappa == doctest::Approx(0.5));
  CHECK(u.state.pi == doctest::Approx(0.25));
  // uses the measurement held from the previous instant
  CHECK(u.prediction == doctest::Approx(2.0));
}

TEST_CASE("Kalman prediction uses the previous measurement") {
  auto u = kalman_update(KalmanState::initial(10.0), 99.0);
  CHECK(u.prediction == doctest::Approx(5.0));
  CHECK(*u.state.previous_measurement == 99.0);
}

TEST_CASE("Kalman converges monotonically on a constant stream") {
  auto s = KalmanState::initial(7.0);
  double prev = 0.0;
  for (int i = 0; i < 60; ++i) {
    auto u = kalman_update(s, 7.0);
    CHECK(u.prediction >= prev);
    CHECK(u.prediction <= 7.0 + 1e-12);
    prev = u.prediction;
    s = u.state;
  }
  CHECK(prev == doctest::Approx(7.0));
}

TEST_CASE("Kalman steady-state gain is the golden ratio conjugate") {
  auto s = KalmanState::initial(1.0);
  for (int i = 0; i < 100; ++i) s = kalman_update(s, 1.0).state;
  CHECK(std::abs(s.kappa - (std::sqrt(5.0) - 1.0) / 2.0) < 1e-6);
}

TEST_CASE("Kalman gain sequence does not depend on the measurements") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 50.0);
  auto a = KalmanState::initial(1.0);
  auto b = KalmanState::initial(30.0);
  for (int i = 0; i < 40; ++i) {
    a = kalman_update(a, u(rng)).state;
    b = kalman_update(b, 2.0).state;
    REQUIRE(a.kappa == b.kappa);
    REQUIRE(a.pi >= 0.0);
    REQUIRE(a.pi_minus >= a.sigma_z_sq);
    REQUIRE(a.kappa >= 0.0);
    REQUIRE(a.kappa <= 1.0);
  }
}

TEST_CASE("negative measurements are rejected") {
  CHECK_THROWS_AS(kalman_update(KalmanState::initial(1.0), -0.1), InputDomainError);
  CHECK_THROWS_AS(adhoc_update(AdHocState::initial(1.0), -0.1), InputDomainError);
  CHECK_THROWS_AS(arma_update(ArmaState::make(0.8, 0.15), -0.1), InputDomainError);
}

TEST_CASE("ad-hoc estimator steps by a fixed gain") {
  CHECK(adhoc_update(AdHocState::initial(10.0), 10.0).prediction == doctest::Approx(1.0));

  AdHocState fixed = AdHocState::initial(5.0);
  fixed.b_hat = 5.0;
  CHECK(adhoc_update(fixed, 5.0).prediction == doctest::Approx(5.0));

  // error shrinks by 0.9 per step
  auto s = AdHocState::initial(10.0);
  double err = 10.0;
  for (int i = 0; i < 20; ++i) {
    auto u = adhoc_update(s, 10.0);
    const double e = 10.0 - u.prediction;
    CHECK(e == doctest::Approx(0.9 * err));
    err = e;
    s = u.state;
    CHECK(s.kappa_fixed == 0.1);
  }
}

TEST_CASE("ARMA weights") {
  CHECK(arma_predict(0.8, 0.15, {10, 10, 10}) == doctest::Approx(10.0));
  CHECK(arma_predict(0.3, 0.3, {10, 10, 10}) == doctest::Approx(10.0));
  // newest last in the argument list
  CHECK(arma_predict(1.0, 0.0, {5, 3, 7}) == doctest::Approx(7.0));
  CHECK(arma_predict(0.5, 0.3, {6, 8, 10}) == doctest::Approx(8.6));
  // naive prediction before three entries
  CHECK(arma_predict(0.5, 0.3, {6, 8}) == doctest::Approx(8.0));
  CHECK_THROWS_AS(ArmaState::make(0.8, 0.3), ConfigError);

  auto s = ArmaState::make(0.5, 0.3);
  for (double v : {1.0, 2.0, 3.0, 4.0, 5.0}) s = arma_update(s, v).state;
  CHECK(s.history.size() == 3);
  CHECK(s.history.front() == 5.0);
}

TEST_CASE("property: ARMA output stays within its history") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> w(0.0, 1.0);
  std::uniform_real_distribution<double> v(0.0, 100.0);
  for (int c = 0; c < 1000; ++c) {
    const double delta = w(rng);
    const double gamma = w(rng) * (1.0 - delta);
    const std::vector<double> h{v(rng), v(rng), v(rng)};
    const double p = arma_predict(delta, gamma, h);
    REQUIRE(p >= *std::min_element(h.begin(), h.end()) - 1e-9);
    REQUIRE(p <= *std::max_element(h.begin(), h.end()) + 1e-9);
  }
}

TEST_CASE("slope convergence at the first strict decrease") {
  const std::vector<double> a{0, 4, 7, 6.5, 8};
  CHECK(detect_convergence_slope(a) == ConvergenceStatus{true, 3});
  const std::vector<double> b{0, 1, 1, 2, 3};
  CHECK_FALSE(detect_convergence_slope(b).converged);
  const std::vector<double> c{0, 5, 5, 4.9};
  CHECK(detect_convergence_slope(c) == ConvergenceStatus{true, 3});
}

TEST_CASE("window convergence") {
  const std::vector<double> flat{10, 10, 10};
  CHECK(detect_convergence_window(flat, 3, 0.2) == ConvergenceStatus{true, 2});
  const std::vector<double> ok{10, 13, 10};
  CHECK(detect_convergence_window(ok, 3, 0.2).converged);
  const std::vector<double> bad{10, 15, 10};
  CHECK_FALSE(detect_convergence_window(bad, 3, 0.2).converged);
  const std::vector<double> zeros{0, 0, 0};
  CHECK_FALSE(detect_convergence_window(zeros, 3, 0.2).converged);
  const std::vector<double> later{0, 20, 10, 10, 11};
  CHECK(detect_convergence_window(later, 3, 0.2) == ConvergenceStatus{true, 4});
}

TEST_CASE("window defaults follow the monitoring interval") {
  EstimatorConfig cfg;
  CHECK(cfg.window_for(60.0) == 10);
  CHECK(cfg.window_for(300.0) == 3);
  cfg.window = 4;
  CHECK(cfg.window_for(60.0) == 4);
}

TEST_CASE("CusPredictor convergence is permanent") {
  EstimatorConfig cfg;
  CusPredictor p(cfg, 300.0);
  CHECK_FALSE(p.initialized());
  p.observe({10.0, 10.0});
  CHECK(p.series().size() == 1);
  CHECK(p.prediction() == 0.0);
  p.observe({10.0, 10.0});
  p.observe({2.0, 8.0});
  p.observe({2.0, 6.0});  // 0.5*10 then toward 2: decrease appears
  REQUIRE(p.converged());
  const auto t = p.status().t_init;
  for (int i = 0; i < 10; ++i) p.observe({50.0, 50.0});
  CHECK(p.status().t_init == t);
  CHECK(p.converged());
}

TEST_CASE("CusPredictor hold repeats the last measurement") {
  EstimatorConfig cfg;
  cfg.kind = EstimatorKind::AdHoc;
  CusPredictor a(cfg, 60.0);
  CusPredictor b(cfg, 60.0);
  a.observe({4.0, 4.0});
  b.observe({4.0, 4.0});
  for (int i = 0; i < 5; ++i) {
    a.hold();
    b.observe({4.0, 4.0});
  }
  CHECK(a.series() == b.series());
}

TEST_CASE("ARMA predictor converges by the window criterion") {
  EstimatorConfig cfg;
  cfg.kind = EstimatorKind::Arma;
  CusPredictor p(cfg, 300.0);
  for (int i = 0; i < 5; ++i) p.observe({3.0, 3.0});
  CHECK(p.converged());
  CHECK(p.prediction() == doctest::Approx(3.0));
}

TEST_CASE("estimator names round trip") {
  for (auto k : {EstimatorKind::Kalman, EstimatorKind::AdHoc, EstimatorKind::Arma}) {
    CHECK(estimator_kind_from_string(to_string(k)) == k);
  }
  CHECK_THROWS_AS(estimator_kind_from_string("arima"), ConfigError);
}
