#include <cmath>
#include <random>
#include <vector>

#include "caas/allocation.hpp"
#include "caas/error.hpp"
#include "doctest.h"

using namespace caas;

namespace {

WorkloadDemand confirmed(std::string id, double r, double d) {
  return {WorkloadId{std::move(id)}, DemandPhase::Confirmed, r, d};
}

WorkloadDemand bootstrapping(std::string id) { return {WorkloadId{std::move(id)}, DemandPhase::Bootstrapping, 0, 0}; }

AllocationConfig uncapped() {
  AllocationConfig cfg;
  cfg.per_workload_cap = 1e12;
  return cfg;
}

double objective(double r, double d, double s) { return r * std::log(s) - d * s; }

}  // namespace

TEST_CASE("optimal_rate is r/d and maximizes the objective") {
  CHECK(optimal_rate(100.0, 50.0) == doctest::Approx(2.0));
  CHECK(optimal_rate(0.0, 50.0) == 0.0);
  CHECK(optimal_rate(70.0, 100.0) == doctest::Approx(0.7));
  for (auto [r, d] : {std::pair{100.0, 50.0}, std::pair{70.0, 100.0}, std::pair{3.0, 7000.0}}) {
    const double s = optimal_rate(r, d);
    const double eps = 1e-3 * s;
    CHECK(objective(r, d, s + eps) < objective(r, d, s));
    CHECK(objective(r, d, s - eps) < objective(r, d, s));
  }
  CHECK_THROWS_AS(optimal_rate(1.0, 0.0), DeadlineExpired);
  CHECK_THROWS_AS(optimal_rate(-1.0, 10.0), InputDomainError);
}

TEST_CASE("optimal_fleet sums confirmed rates and bootstrap allowances") {
  AllocationConfig cfg;
  CHECK(optimal_fleet({}, cfg) == 0.0);
  const std::vector<WorkloadDemand> two{confirmed("a", 200, 100), confirmed("b", 70, 100)};
  CHECK(optimal_fleet(two, cfg) == doctest::Approx(2.7));
  const std::vector<WorkloadDemand> mixed{confirmed("a", 300, 100), bootstrapping("b")};
  CHECK(optimal_fleet(mixed, cfg) == doctest::Approx(4.0));
}

TEST_CASE("expired deadlines run at the cap") {
  AllocationConfig cfg;
  CHECK(demand_rate(confirmed("a", 50, 0.0), cfg) == cfg.per_workload_cap);
  CHECK(demand_rate(confirmed("a", 50, -10.0), cfg) == cfg.per_workload_cap);
  CHECK(demand_rate(confirmed("a", 0, -10.0), cfg) == 0.0);
}

TEST_CASE("allocate regimes") {
  const auto cfg = uncapped();
  SUBCASE("downscaled") {
    const std::vector<WorkloadDemand> d{confirmed("a", 1200, 100), confirmed("b", 800, 100)};  // N* = 20
    const auto plan = allocate(d, 10, cfg);
    CHECK(plan.regime == Regime::Downscaled);
    CHECK(plan.scale == doctest::Approx(0.75));
    CHECK(plan.rates.at(WorkloadId{"a"}) == doctest::Approx(9.0));
    CHECK(plan.rates.at(WorkloadId{"b"}) == doctest::Approx(6.0));
  }
  SUBCASE("upscaled") {
    const std::vector<WorkloadDemand> d{confirmed("a", 300, 100), confirmed("b", 200, 100)};  // N* = 5
    const auto plan = allocate(d, 10, cfg);
    CHECK(plan.regime == Regime::Upscaled);
    CHECK(plan.scale == doctest::Approx(1.8));
  }
  SUBCASE("exact") {
    const std::vector<WorkloadDemand> d{confirmed("a", 1200, 100)};  // N* = 12
    const auto plan = allocate(d, 10, cfg);
    CHECK(plan.regime == Regime::Exact);
    CHECK(plan.rates.at(WorkloadId{"a"}) == doctest::Approx(12.0));
  }
  SUBCASE("no demand") {
    const std::vector<WorkloadDemand> d{confirmed("a", 0, 100)};
    const auto plan = allocate(d, 10, cfg);
    CHECK(plan.regime == Regime::Exact);
    CHECK(plan.rates.at(WorkloadId{"a"}) == 0.0);
  }
}

TEST_CASE("per-workload cap clamps after scaling") {
  AllocationConfig cfg;
  const std::vector<WorkloadDemand> d{confirmed("a", 1500, 100), confirmed("b", 100, 100)};  // N* = 16
  const auto plan = allocate(d, 20, cfg);
  CHECK(plan.regime == Regime::Upscaled);
  CHECK(plan.rates.at(WorkloadId{"a"}) == 10.0);
  CHECK(plan.rates.at(WorkloadId{"b"}) == doctest::Approx(1.125));
}

TEST_CASE("property: sum contracts, proportions and scale consistency") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int c = 0; c < 2000; ++c) {
    AllocationConfig cfg = uncapped();
    cfg.alpha = 0.5 + 10.0 * u(rng);
    cfg.beta = 0.05 + 0.95 * u(rng);
    const int n_tot = static_cast<int>(rng() % 60);
    std::vector<WorkloadDemand> d;
    const int n = 1 + static_cast<int>(rng() % 12);
    for (int i = 0; i < n; ++i) d.push_back(confirmed("w" + std::to_string(i), 1.0 + 5000.0 * u(rng), 10.0 + 3000.0 * u(rng)));
    const auto plan = allocate(d, n_tot, cfg);
    double sum = 0.0;
    for (const auto& [id, r] : plan.rates) sum += r;
    switch (plan.regime) {
      case Regime::Exact: REQUIRE(sum == doctest::Approx(plan.n_star).epsilon(1e-9)); break;
      case Regime::Downscaled: REQUIRE(std::abs(sum - (n_tot + cfg.alpha)) <= 1e-9 * std::max(1.0, sum)); break;
      case Regime::Upscaled: REQUIRE(std::abs(sum - cfg.beta * n_tot) <= 1e-9 * std::max(1.0, sum)); break;
    }
    const auto& a = d.front().id;
    for (const auto& [id, r] : plan.rates) {
      REQUIRE(r * plan.optimal.at(a) == doctest::Approx(plan.rates.at(a) * plan.optimal.at(id)).epsilon(1e-9));
    }
    auto doubled = d;
    for (auto& x : doubled) {
      x.required_cus *= 2.0;
      x.time_to_deadline *= 2.0;
    }
    const auto plan2 = allocate(doubled, n_tot, cfg);
    REQUIRE(plan2.regime == plan.regime);
    for (const auto& [id, r] : plan.rates) REQUIRE(plan2.rates.at(id) == doctest::Approx(r).epsilon(1e-12));
  }
}

TEST_CASE("confirmed_ttc extends only when the cap would be exceeded") {
  CHECK(confirmed_ttc(500, 100, 10) == 100.0);
  CHECK(confirmed_ttc(2000, 100, 10) == doctest::Approx(200.0));
  CHECK(confirmed_ttc(0, 123, 10) == 123.0);
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(1.0, 1e5);
  for (int i = 0; i < 1000; ++i) {
    const double r = u(rng);
    const double ttc = confirmed_ttc(r, u(rng) / 10.0, 10.0);
    REQUIRE(optimal_rate(r, ttc) <= 10.0 + 1e-9);
  }
}

TEST_CASE("confirm_ttc requires predictions and confirms the workload") {
  const DataTypeId img{"image"};
  Workload w(WorkloadId{"w"}, 0.0, {{img, 100}}, 1000.0);
  AllocationConfig cfg;
  CHECK_THROWS_AS(confirm_ttc(w, 100.0, {}, cfg), EstimatorNotReady);
  CHECK(w.status() == WorkloadStatus::Bootstrapping);
  CHECK(confirm_ttc(w, 100.0, {{img, 20.0}}, cfg) == doctest::Approx(200.0));
  CHECK(w.status() == WorkloadStatus::Confirmed);
}

TEST_CASE("allocation config validation") {
  AllocationConfig cfg;
  cfg.beta = 1.5;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = {};
  cfg.alpha = 0.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = {};
  cfg.per_workload_cap = 0.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  CHECK_THROWS_AS(allocate({}, -1, AllocationConfig{}), InputDomainError);
}
