#include <algorithm>
#include <map>
#include <random>
#include <vector>

#include "caas/error.hpp"
#include "caas/simulation.hpp"
#include "doctest.h"

using namespace caas;

TEST_CASE("paper schedule shape") {
  for (std::uint64_t seed : {1u, 2u, 99u}) {
    const auto s = generate_paper_schedule(seed);
    REQUIRE(s.workloads.size() == 30);
    std::map<std::string, int> per_class;
    std::vector<std::int64_t> transcode_items;
    for (std::size_t k = 0; k < s.workloads.size(); ++k) {
      const auto& w = s.workloads[k];
      CHECK(w.arrival_time == doctest::Approx(300.0 * static_cast<double>(k)));
      ++per_class[w.workload_class];
      for (const auto& t : w.types) {
        CHECK(t.items > 0);
        if (w.workload_class == "transcode") transcode_items.push_back(t.items);
      }
    }
    CHECK(per_class["face-detection"] == 8);
    CHECK(per_class["transcode"] == 8);
    CHECK(per_class["feature-extraction"] == 7);
    CHECK(per_class["sift"] == 7);
    CHECK(std::count(transcode_items.begin(), transcode_items.end(), 200) >= 1);
    CHECK(std::count(transcode_items.begin(), transcode_items.end(), 300) >= 1);
    CHECK_NOTHROW(s.validate());
  }
}

TEST_CASE("paper schedule is deterministic per seed") {
  CHECK(generate_paper_schedule(5) == generate_paper_schedule(5));
  CHECK_FALSE(generate_paper_schedule(5) == generate_paper_schedule(6));
}

TEST_CASE("large workload positions can be pinned") {
  ScheduleOptions o;
  o.large_positions = std::array<std::size_t, 2>{3, 20};
  const auto s = generate_paper_schedule(1, o);
  const auto a = s.workloads[3].types[0].items;
  const auto b = s.workloads[20].types[0].items;
  CHECK(std::min(a, b) == 200);
  CHECK(std::max(a, b) == 300);
}

TEST_CASE("synthesize_measurement") {
  std::mt19937_64 rng(1);
  const std::vector<double> two{3.0, 5.0};
  CHECK(synthesize_measurement(two, 0.0, rng) == 4.0);

  std::mt19937_64 a(42);
  std::mt19937_64 b(42);
  const double m = synthesize_measurement(two, 0.25, a);
  CHECK(m == synthesize_measurement(two, 0.25, b));
  CHECK(m != 4.0);

  // large negative draws clamp to zero
  const std::vector<double> tiny{0.1};
  std::mt19937_64 c(3);
  bool clamped = false;
  for (int i = 0; i < 200; ++i) {
    const double v = synthesize_measurement(tiny, 100.0, c);
    CHECK(v >= 0.0);
    clamped = clamped || v == 0.0;
  }
  CHECK(clamped);
  CHECK_THROWS_AS(synthesize_measurement({}, 0.0, rng), InputDomainError);
}

TEST_CASE("scenario validation names the field") {
  auto s = generate_paper_schedule(1);
  s.controller.beta = 1.5;
  try {
    s.validate();
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.field() == "beta");
  }
  s = generate_paper_schedule(1);
  s.workloads[1].arrival_time = -5.0;
  CHECK_THROWS_AS(s.validate(), ConfigError);
  s = generate_paper_schedule(1);
  s.workloads[1].id = s.workloads[0].id;
  CHECK_THROWS_AS(s.validate(), ConfigError);
  s = generate_paper_schedule(1);
  s.workloads[0].types[0].items = 0;
  CHECK_THROWS_AS(s.validate(), ConfigError);
}

TEST_CASE("default horizon is last arrival plus ten times the largest TTC") {
  const auto s = generate_paper_schedule(1);
  CHECK(s.effective_horizon() == doctest::Approx(29 * 300.0 + 10 * 7620.0));
}
