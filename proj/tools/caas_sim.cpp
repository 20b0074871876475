// caas-sim: run experiment sweeps, generate the thirty-workload schedule,
// lint scenario files.

#include <cstdio>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "caas/error.hpp"
#include "caas/experiment.hpp"
#include "caas/scenario_io.hpp"

namespace {

void print_summary(const caas::MetricsReport& report) {
  std::printf("%-12s %-10s %6s %10s %10s %9s %6s %9s\n", "controller", "estimator", "mon_s", "cost", "lb", "excess%",
              "max_n", "ttc_met");
  for (const auto& r : report.controllers) {
    std::printf("%-12s %-10s %6.0f %10.4f %10.4f %9.1f %6d %5d/%-3d\n", r.controller.c_str(), r.estimator.c_str(),
                r.monitoring_interval, r.mean_cost, r.mean_lb, r.excess_over_lb_percent, r.max_instances, r.ttc_met,
                r.workloads);
  }
  for (const auto& e : report.estimators) {
    std::printf("estimator %s @%.0fs: time to prediction %.0f s, MAE %.1f%%, %d converged, %d excluded\n",
                e.estimator.c_str(), e.monitoring_interval, e.stats.overall.mean_time_to_prediction,
                e.stats.overall.mae_percent, e.stats.overall.converged, e.stats.overall.excluded);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Compute-unit autoscaling simulator"};
  app.require_subcommand(1);

  std::string spec_path;
  std::string out_dir;
  int workers = 0;
  std::optional<std::uint64_t> seed;
  std::optional<double> interval;

  auto* run = app.add_subcommand("run", "Run an experiment spec");
  run->add_option("spec", spec_path, "Experiment spec (JSON)")->required()->check(CLI::ExistingFile);
  run->add_option("--out", out_dir, "Output directory (overrides the spec)");
  run->add_option("--workers", workers, "Parallel runs")->check(CLI::PositiveNumber);
  run->add_option("--seed", seed, "Run this single seed instead of the spec's list");
  run->add_option("--monitor-interval", interval, "Monitoring interval in seconds")->check(CLI::IsMember({60.0, 300.0}));

  std::uint64_t gen_seed = 1;
  std::string gen_out;
  std::optional<double> gen_interval;
  auto* gen = app.add_subcommand("gen-scenario", "Write the generated thirty-workload scenario");
  gen->add_option("--seed", gen_seed, "Schedule seed");
  gen->add_option("--out", gen_out, "Output file (stdout when omitted)");
  gen->add_option("--monitor-interval", gen_interval, "Monitoring interval in seconds")
      ->check(CLI::IsMember({60.0, 300.0}));

  std::string scenario_path;
  auto* validate = app.add_subcommand("validate", "Check a scenario file");
  validate->add_option("scenario", scenario_path, "Scenario (JSON)")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      auto spec = caas::load_experiment(spec_path);
      if (!out_dir.empty()) spec.output_dir = out_dir;
      if (workers > 0) spec.workers = workers;
      if (seed) spec.seeds = {*seed};
      if (interval) spec.monitoring_intervals = {*interval};
      const auto out = caas::run_experiment(spec);
      caas::write_outputs(out, spec.output_dir);
      print_summary(out.report);
      std::printf("wrote %zu runs to %s\n", out.logs.size(), spec.output_dir.string().c_str());
    } else if (*gen) {
      auto s = caas::generate_paper_schedule(gen_seed);
      if (gen_interval) s.monitoring_interval = *gen_interval;
      if (gen_out.empty()) {
        std::cout << caas::dump_scenario(s);
      } else {
        caas::save_scenario(gen_out, s);
      }
    } else if (*validate) {
      const auto s = caas::load_scenario(scenario_path);
      std::printf("%s: ok (%zu workloads)\n", scenario_path.c_str(), s.workloads.size());
    }
  } catch (const caas::ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const caas::ParseError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
