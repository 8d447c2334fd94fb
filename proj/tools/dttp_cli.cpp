#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "dttp/dynamics.hpp"
#include "dttp/evolve.hpp"
#include "dttp/harness.hpp"
#include "dttp/instance.hpp"
#include "dttp/metrics.hpp"

namespace {

int cmd_gen_instance(const std::string& tsp, const std::string& type,
                     std::uint64_t seed, const std::string& out) {
  dttp::InstanceSpec spec;
  spec.tsp_source = tsp;
  if (type.size() != 1) throw dttp::ConfigError("--type must be A, B or C");
  spec.kp_type = type[0];
  spec.seed = seed;
  const dttp::TtpInstance inst = dttp::generate_instance(spec);
  dttp::write_instance(inst, out);
  std::cout << "wrote " << out << " (" << inst.n_cities() << " cities, "
            << inst.n_items() << " items, W=" << inst.capacity() << ")\n";
  return 0;
}

int cmd_gen_schedule(const std::string& instance_path, const std::string& kind,
                     double dn, double cf, int period, int changes,
                     std::uint64_t seed, const std::string& out) {
  const dttp::TtpInstance inst = dttp::read_instance(instance_path);
  dttp::DynamicsConfig config = dttp::DynamicsConfig::defaults(dttp::dynamics_kind_from(kind));
  if (dn > 0) config.magnitude = dn;
  config.change_factor = cf;
  config.period = period;
  config.n_changes = changes;
  const dttp::ChangeSchedule schedule = dttp::generate_schedule(inst, config, seed);
  dttp::save_schedule(schedule, out);
  std::cout << "wrote " << out << " (" << schedule.events.size() << " events, kind "
            << dttp::to_string(schedule.kind) << ")\n";
  return 0;
}

int cmd_run(const std::string& plan_path, int threads) {
  const dttp::ExperimentPlan plan = dttp::load_plan(plan_path);
  const dttp::ExperimentResult result = dttp::run_experiment(plan, threads);
  std::cout << "experiment artifacts in " << result.out_dir.string() << "\n";
  if (!result.failed_cells.empty()) {
    std::cerr << result.failed_cells.size()
              << " run(s) failed; see manifest.json (ranking skipped)\n";
    return 1;
  }
  if (!result.ranked)
    std::cout << "ranking skipped (fewer than two strategies)\n";
  return 0;
}

int cmd_run_static(const std::string& instance_path, const std::string& combo,
                   std::uint64_t seed, const std::string& out, int generations,
                   int pop_size) {
  const dttp::TtpInstance inst = dttp::read_instance(instance_path);
  dttp::EaConfig config;
  if (generations > 0) config.generations_static = generations;
  if (pop_size > 0) config.pop_size = pop_size;
  const dttp::StaticRunResult result = dttp::run_static(inst, combo, config, seed);
  std::ofstream os(out);
  if (!os) throw dttp::Error("cannot write " + out);
  dttp::write_static_csv(os, result);
  std::cout << "wrote " << out << " (" << result.final_population.size()
            << " final solutions)\n";
  return 0;
}

int cmd_rank(const std::string& in_path, const std::string& out_path) {
  const auto snapshots = dttp::read_snapshot_csv(in_path);
  const dttp::RankTable table = dttp::rank_strategies(snapshots);
  std::ofstream os(out_path);
  if (!os) throw dttp::Error("cannot write " + out_path);
  dttp::write_rank_csv(os, table);
  std::cout << "wrote " << out_path << " (" << table.rows.size() << " rows)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dttp: dynamic travelling thief problem laboratory"};
  app.require_subcommand(1);

  // gen-instance
  auto* gi = app.add_subcommand("gen-instance", "Generate an A/B/C instance from a coordinate source");
  std::string gi_tsp = "city52", gi_type = "A", gi_out;
  std::uint64_t gi_seed = 0;
  gi->add_option("--tsp", gi_tsp, "Coordinate file ('id x y' rows) or built-in fixture name");
  gi->add_option("--type", gi_type, "Knapsack type: A, B or C")->required();
  gi->add_option("--seed", gi_seed, "Item generator seed");
  gi->add_option("--out", gi_out, "Output instance file")->required();

  // gen-schedule
  auto* gs = app.add_subcommand("gen-schedule", "Generate a reproducible change schedule");
  std::string gs_instance, gs_kind, gs_out;
  double gs_dn = -1.0, gs_cf = 0.02;
  int gs_period = 200, gs_changes = 5;
  std::uint64_t gs_seed = 0;
  gs->add_option("--instance", gs_instance, "Instance file")->required();
  gs->add_option("--kind", gs_kind, "Dynamics kind: loc, ava or val")->required();
  gs->add_option("--dn", gs_dn, "Magnitude (Loc: city count, default 2; Ava/Val: % of items, default 5)");
  gs->add_option("--cf", gs_cf, "Val change factor (default 0.02)");
  gs->add_option("--period", gs_period, "Generations between changes (default 200)");
  gs->add_option("--changes", gs_changes, "Number of change events (default 5)");
  gs->add_option("--seed", gs_seed, "Schedule seed");
  gs->add_option("--out", gs_out, "Output schedule file")->required();

  // run
  auto* run = app.add_subcommand("run", "Run the experiment grid described by a plan file");
  std::string run_plan;
  int run_threads = 0;
  run->add_option("--plan", run_plan, "Plan file (JSON)")->required();
  run->add_option("--threads", run_threads, "Worker threads (default: hardware)");

  // run-static
  auto* rs = app.add_subcommand("run-static", "Static run with one initialization combo");
  std::string rs_instance, rs_combo, rs_out;
  std::uint64_t rs_seed = 0;
  int rs_generations = 0, rs_pop = 0;
  rs->add_option("--instance", rs_instance, "Instance file")->required();
  rs->add_option("--combo", rs_combo, "Initialization combo: ss sg sr gs gg gr rs rg rr")->required();
  rs->add_option("--seed", rs_seed, "Run seed");
  rs->add_option("--out", rs_out, "Output CSV")->required();
  rs->add_option("--generations", rs_generations, "Override generation count (default 1000)");
  rs->add_option("--pop", rs_pop, "Override population size (default 60)");

  // rank
  auto* rk = app.add_subcommand("rank", "Rank strategies from an end-of-interval snapshot CSV");
  std::string rk_in, rk_out;
  rk->add_option("--in", rk_in, "snapshots.csv produced by 'run'")->required();
  rk->add_option("--out", rk_out, "Output rank CSV")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (gi->parsed()) return cmd_gen_instance(gi_tsp, gi_type, gi_seed, gi_out);
    if (gs->parsed())
      return cmd_gen_schedule(gs_instance, gs_kind, gs_dn, gs_cf, gs_period, gs_changes,
                              gs_seed, gs_out);
    if (run->parsed()) return cmd_run(run_plan, run_threads);
    if (rs->parsed())
      return cmd_run_static(rs_instance, rs_combo, rs_seed, rs_out, rs_generations, rs_pop);
    if (rk->parsed()) return cmd_rank(rk_in, rk_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
