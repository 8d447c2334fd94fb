#include "dttp/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

#include <json.hpp>

namespace dttp {

namespace {

std::string fmt_csv_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

int parse_int_tok(const std::string& tok, int line) {
  int v = 0;
  const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size())
    throw ParseError("expected an integer, got '" + tok + "'", line);
  return v;
}

double parse_double_tok(const std::string& tok, int line) {
  double v = 0.0;
  const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size())
    throw ParseError("expected a number, got '" + tok + "'", line);
  return v;
}

std::string source_stem(const std::string& source) {
  const std::filesystem::path p(source);
  const std::string stem = p.stem().string();
  return stem.empty() ? source : stem;
}

}  // namespace

std::vector<City> load_coords(const std::string& source) {
  if (source == "city52") return builtin_city52();
  std::ifstream in(source);
  if (!in) throw Error("cannot open coordinate source '" + source +
                       "' (not a file and not a built-in fixture name)");
  std::vector<City> cities;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ss(line);
    std::vector<std::string> toks;
    std::string tok;
    while (ss >> tok) toks.push_back(tok);
    if (toks.empty()) continue;
    if (toks.size() != 3)
      throw ParseError("coordinate row must be 'id x y'", line_no);
    cities.push_back(City{parse_int_tok(toks[0], line_no),
                          parse_double_tok(toks[1], line_no),
                          parse_double_tok(toks[2], line_no)});
  }
  if (cities.size() < 3)
    throw ValidationError("coordinate source '" + source + "' has fewer than 3 cities");
  return cities;
}

TtpInstance generate_instance(const InstanceSpec& spec) {
  if (spec.kp_type != 'A' && spec.kp_type != 'B' && spec.kp_type != 'C')
    throw ConfigError("knapsack type must be A, B or C");
  std::vector<City> cities = load_coords(spec.tsp_source);

  const int per_city = spec.kp_type == 'A' ? 1 : spec.kp_type == 'B' ? 5 : 10;
  const double capacity_class = spec.kp_type == 'A' ? 3.0 : spec.kp_type == 'B' ? 6.0 : 9.0;

  Rng rng(mix_seed(spec.seed, fnv1a64(std::string("instance-") + spec.kp_type)));
  std::vector<Item> items;
  items.reserve(static_cast<std::size_t>(cities.size() - 1) * per_city);
  double weight_sum = 0.0;
  int next_id = 1;
  for (std::size_t c = 1; c < cities.size(); ++c) {  // city 1 holds no items
    for (int k = 0; k < per_city; ++k) {
      double w = 0.0, p = 0.0;
      switch (spec.kp_type) {
        case 'A':
          w = static_cast<double>(rng.uniform_int(1, 1000));
          p = w + 100.0;
          break;
        case 'B':
          w = static_cast<double>(rng.uniform_int(1000, 1010));
          p = static_cast<double>(rng.uniform_int(1, 1000));
          break;
        default:
          w = static_cast<double>(rng.uniform_int(1, 1000));
          p = static_cast<double>(rng.uniform_int(1, 1000));
          break;
      }
      items.push_back(Item{next_id++, p, w, cities[c].id});
      weight_sum += w;
    }
  }
  const double capacity = capacity_class / 11.0 * weight_sum;
  const std::string name = source_stem(spec.tsp_source) + std::string(1, spec.kp_type);
  return TtpInstance::create(name, std::move(cities), std::move(items), capacity);
}

namespace {

nlohmann::json ea_to_json(const EaConfig& ea) {
  return nlohmann::json{{"pop_size", ea.pop_size},
                        {"generations_static", ea.generations_static},
                        {"crossover_rate", ea.crossover_rate},
                        {"tour_swap_rate", ea.tour_swap_rate},
                        {"bitflip_rate", ea.bitflip_rate},
                        {"tournament_size", ea.tournament_size},
                        {"solver_passes", ea.solver_passes}};
}

EaConfig ea_from_json(const nlohmann::json& j) {
  EaConfig ea;
  ea.pop_size = j.value("pop_size", ea.pop_size);
  ea.generations_static = j.value("generations_static", ea.generations_static);
  ea.crossover_rate = j.value("crossover_rate", ea.crossover_rate);
  ea.tour_swap_rate = j.value("tour_swap_rate", ea.tour_swap_rate);
  ea.bitflip_rate = j.value("bitflip_rate", ea.bitflip_rate);
  ea.tournament_size = j.value("tournament_size", ea.tournament_size);
  ea.solver_passes = j.value("solver_passes", ea.solver_passes);
  return ea;
}

/// Plan echo without the output directory, so two runs of one plan into
/// different directories produce identical manifests.
nlohmann::json plan_to_json(const ExperimentPlan& plan, bool with_out_dir) {
  nlohmann::json j{
      {"instance",
       {{"tsp", plan.instance.tsp_source},
        {"type", std::string(1, plan.instance.kp_type)},
        {"seed", plan.instance.seed}}},
      {"dynamics",
       {{"kind", to_string(plan.dynamics.kind)},
        {"magnitude", plan.dynamics.magnitude},
        {"change_factor", plan.dynamics.change_factor},
        {"period", plan.dynamics.period},
        {"n_changes", plan.dynamics.n_changes}}},
      {"schedules", plan.n_schedules},
      {"repeats", plan.n_repeats},
      {"strategies", plan.strategies},
      {"master_seed", plan.master_seed},
      {"ea", ea_to_json(plan.ea)}};
  if (with_out_dir) j["out"] = plan.out_dir;
  return j;
}

}  // namespace

ExperimentPlan load_plan(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open plan file " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("plan is not valid JSON: ") + e.what());
  }
  try {
    ExperimentPlan plan;
    const auto& ji = j.at("instance");
    plan.instance.tsp_source = ji.at("tsp").get<std::string>();
    const std::string type = ji.at("type").get<std::string>();
    if (type.size() != 1) throw ConfigError("instance type must be A, B or C");
    plan.instance.kp_type = type[0];
    plan.instance.seed = ji.at("seed").get<std::uint64_t>();

    const auto& jd = j.at("dynamics");
    plan.dynamics.kind = dynamics_kind_from(jd.at("kind").get<std::string>());
    plan.dynamics.magnitude =
        jd.value("magnitude", DynamicsConfig::defaults(plan.dynamics.kind).magnitude);
    plan.dynamics.change_factor = jd.value("change_factor", 0.02);
    plan.dynamics.period = jd.value("period", 200);
    plan.dynamics.n_changes = jd.value("n_changes", 5);

    plan.n_schedules = j.value("schedules", 10);
    plan.n_repeats = j.value("repeats", 30);
    plan.strategies =
        j.value("strategies", std::vector<std::string>{});
    plan.master_seed = j.at("master_seed").get<std::uint64_t>();
    plan.out_dir = j.at("out").get<std::string>();
    if (j.contains("ea")) plan.ea = ea_from_json(j.at("ea"));
    return plan;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed plan field: ") + e.what());
  }
}

void save_plan(const ExperimentPlan& plan, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write plan file " + path.string());
  out << plan_to_json(plan, true).dump(2) << "\n";
}

std::uint64_t schedule_seed(const ExperimentPlan& plan, int schedule_idx) {
  return mix_seed(mix_seed(plan.master_seed, fnv1a64("schedule")),
                  static_cast<std::uint64_t>(schedule_idx));
}

std::uint64_t run_seed(const ExperimentPlan& plan, int schedule_idx, int repeat_idx,
                       const std::string& strategy) {
  std::uint64_t h = mix_seed(plan.master_seed, fnv1a64("run"));
  h = mix_seed(h, static_cast<std::uint64_t>(schedule_idx));
  h = mix_seed(h, static_cast<std::uint64_t>(repeat_idx));
  return mix_seed(h, fnv1a64(strategy));
}

std::string run_id(const std::string& strategy, int schedule_idx, int repeat_idx) {
  return strategy + "-s" + std::to_string(schedule_idx) + "-r" +
         std::to_string(repeat_idx);
}

void parse_run_id(const std::string& id, std::string& strategy, int& schedule_idx,
                  int& repeat_idx) {
  const auto s_pos = id.find("-s");
  const auto r_pos = id.rfind("-r");
  if (s_pos == std::string::npos || r_pos == std::string::npos || r_pos <= s_pos)
    throw ParseError("run id '" + id + "' is not <strategy>-s<i>-r<j>");
  strategy = id.substr(0, s_pos);
  schedule_idx = parse_int_tok(id.substr(s_pos + 2, r_pos - s_pos - 2), 0);
  repeat_idx = parse_int_tok(id.substr(r_pos + 2), 0);
}

std::string file_digest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open file for digest: " + path.string());
  std::uint64_t h = 0xcbf29ce484222325ull;
  char buf[4096];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 0x100000001b3ull;
    }
    if (in.eof()) break;
  }
  char out[17];
  std::snprintf(out, sizeof(out), "%016llx", static_cast<unsigned long long>(h));
  return out;
}

namespace {

struct RunResult {
  bool ok = false;
  std::string error;
  std::vector<GenRecord> records;
  std::vector<IntervalSnapshot> snapshots;  // populations dropped
  int archive_violations = 0;
};

}  // namespace

ExperimentResult run_experiment(const ExperimentPlan& plan, int threads) {
  std::vector<std::string> strategies = plan.strategies;
  if (strategies.empty()) strategies = StrategySpec::dynamic_ids();
  std::vector<StrategySpec> specs;
  for (const std::string& id : strategies) specs.push_back(StrategySpec::from_id(id));
  if (plan.n_schedules < 1 || plan.n_repeats < 1)
    throw ConfigError("plan needs at least one schedule and one repeat");
  validate_config(plan.ea);

  const TtpInstance inst = generate_instance(plan.instance);
  validate_config(plan.dynamics, inst);

  const std::filesystem::path out_dir(plan.out_dir);
  std::filesystem::create_directories(out_dir / "schedules");
  std::filesystem::create_directories(out_dir / "traces");

  write_instance(inst, out_dir / "instance.ttp");

  std::vector<ChangeSchedule> schedules;
  std::vector<std::filesystem::path> schedule_paths;
  for (int si = 0; si < plan.n_schedules; ++si) {
    schedules.push_back(generate_schedule(inst, plan.dynamics, schedule_seed(plan, si)));
    char name[48];
    std::snprintf(name, sizeof(name), "schedule_%03d.json", si);
    schedule_paths.push_back(out_dir / "schedules" / name);
    save_schedule(schedules.back(), schedule_paths.back());
  }

  struct Job {
    int strategy_idx;
    int schedule_idx;
    int repeat_idx;
  };
  std::vector<Job> jobs;
  for (int ti = 0; ti < static_cast<int>(strategies.size()); ++ti)
    for (int si = 0; si < plan.n_schedules; ++si)
      for (int ri = 0; ri < plan.n_repeats; ++ri) jobs.push_back(Job{ti, si, ri});

  std::vector<RunResult> results(jobs.size());
  std::atomic<std::size_t> next_job{0};
  const int n_threads =
      threads > 0 ? threads
                  : std::max(1u, std::thread::hardware_concurrency());
  auto worker = [&]() {
    while (true) {
      const std::size_t j = next_job.fetch_add(1);
      if (j >= jobs.size()) return;
      const Job& job = jobs[j];
      RunResult& res = results[j];
      try {
        Rng rng(run_seed(plan, job.schedule_idx, job.repeat_idx,
                         strategies[static_cast<std::size_t>(job.strategy_idx)]));
        RunTrace trace = run_dynamic(
            inst, schedules[static_cast<std::size_t>(job.schedule_idx)],
            specs[static_cast<std::size_t>(job.strategy_idx)], plan.ea, rng);
        res.records = std::move(trace.records);
        res.archive_violations = trace.archive_violations;
        for (IntervalSnapshot& s : trace.snapshots) {
          s.population.clear();  // keep the measurements only
          res.snapshots.push_back(std::move(s));
        }
        res.ok = true;
      } catch (const std::exception& e) {
        res.ok = false;
        res.error = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();

  ExperimentResult result;
  result.out_dir = out_dir;

  // Artifacts are written single-threaded in canonical grid order.
  std::ofstream snap_out(out_dir / "snapshots.csv");
  snap_out << kSnapshotCsvHeader;
  nlohmann::json run_seeds = nlohmann::json::object();
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    const Job& job = jobs[j];
    const std::string& strategy = strategies[static_cast<std::size_t>(job.strategy_idx)];
    const std::string id = run_id(strategy, job.schedule_idx, job.repeat_idx);
    run_seeds[id] = run_seed(plan, job.schedule_idx, job.repeat_idx, strategy);
    const RunResult& res = results[j];
    if (!res.ok) {
      result.failed_cells.push_back(id + ": " + res.error);
      continue;
    }
    result.archive_violations += res.archive_violations;

    std::ofstream trace_out(out_dir / "traces" / (id + ".csv"));
    trace_out << "run_id,strategy,schedule_seed,generation,interval,hypervolume,spread\n";
    const std::uint64_t sseed = schedule_seed(plan, job.schedule_idx);
    for (const GenRecord& r : res.records)
      trace_out << id << ',' << strategy << ',' << sseed << ',' << r.generation << ','
                << r.interval << ',' << fmt_csv_double(r.hypervolume) << ','
                << fmt_csv_double(r.spread) << '\n';

    for (const IntervalSnapshot& s : res.snapshots) {
      snap_out << id << ',' << s.interval << ',' << fmt_csv_double(s.hypervolume) << ','
               << fmt_csv_double(s.spread) << '\n';
      result.snapshots.push_back(SnapshotValue{strategy, job.schedule_idx, job.repeat_idx,
                                               s.interval, s.hypervolume, s.spread});
    }
  }
  snap_out.close();

  std::vector<std::string> notes;
  const bool complete = result.failed_cells.empty();

  if (complete) {
    // Mean hypervolume/spread profiles per strategy across schedules x repeats.
    std::ofstream prof(out_dir / "profiles.csv");
    prof << "strategy,generation,mean_hypervolume,mean_spread\n";
    const std::size_t runs_per_strategy =
        static_cast<std::size_t>(plan.n_schedules) * plan.n_repeats;
    for (int ti = 0; ti < static_cast<int>(strategies.size()); ++ti) {
      std::vector<double> hv_sum, sp_sum;
      for (std::size_t j = 0; j < jobs.size(); ++j) {
        if (jobs[j].strategy_idx != ti) continue;
        const auto& records = results[j].records;
        if (hv_sum.empty()) {
          hv_sum.assign(records.size(), 0.0);
          sp_sum.assign(records.size(), 0.0);
        }
        for (std::size_t g = 0; g < records.size(); ++g) {
          hv_sum[g] += records[g].hypervolume;
          sp_sum[g] += records[g].spread;
        }
      }
      for (std::size_t g = 0; g < hv_sum.size(); ++g)
        prof << strategies[static_cast<std::size_t>(ti)] << ',' << g << ','
             << fmt_csv_double(hv_sum[g] / static_cast<double>(runs_per_strategy)) << ','
             << fmt_csv_double(sp_sum[g] / static_cast<double>(runs_per_strategy)) << '\n';
    }
  } else {
    notes.push_back("profiles skipped: incomplete grid");
  }

  if (!complete) {
    notes.push_back("ranking skipped: incomplete grid (" +
                    std::to_string(result.failed_cells.size()) + " failed cells)");
  } else if (strategies.size() < 2) {
    notes.push_back("ranking skipped: fewer than two strategies");
  } else {
    const RankTable table = rank_strategies(result.snapshots);
    std::ofstream ranks(out_dir / "ranks.csv");
    write_rank_csv(ranks, table);
    result.ranked = true;
  }

  nlohmann::json manifest{
      {"plan", plan_to_json(plan, false)},
      {"schedule_seeds", nlohmann::json::array()},
      {"run_seeds", std::move(run_seeds)},
      {"archive_violations", result.archive_violations},
      {"failed_cells", result.failed_cells},
      {"notes", notes}};
  for (int si = 0; si < plan.n_schedules; ++si)
    manifest["schedule_seeds"].push_back(schedule_seed(plan, si));

  nlohmann::json digests = nlohmann::json::object();
  digests["instance.ttp"] = file_digest(out_dir / "instance.ttp");
  for (int si = 0; si < plan.n_schedules; ++si) {
    const auto rel = std::filesystem::path("schedules") / schedule_paths[si].filename();
    digests[rel.generic_string()] = file_digest(schedule_paths[si]);
  }
  digests["snapshots.csv"] = file_digest(out_dir / "snapshots.csv");
  if (complete) digests["profiles.csv"] = file_digest(out_dir / "profiles.csv");
  if (result.ranked) digests["ranks.csv"] = file_digest(out_dir / "ranks.csv");
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    if (!results[j].ok) continue;
    const Job& job = jobs[j];
    const std::string id = run_id(strategies[static_cast<std::size_t>(job.strategy_idx)],
                                  job.schedule_idx, job.repeat_idx);
    const auto rel = std::filesystem::path("traces") / (id + ".csv");
    digests[rel.generic_string()] = file_digest(out_dir / rel);
  }
  manifest["files"] = std::move(digests);

  std::ofstream mf(out_dir / "manifest.json");
  mf << manifest.dump(2) << "\n";
  return result;
}

StaticRunResult run_static(const TtpInstance& inst, const std::string& combo,
                           const EaConfig& config, std::uint64_t seed) {
  const auto& ids = StrategySpec::static_ids();
  if (std::find(ids.begin(), ids.end(), combo) == ids.end())
    throw ConfigError("combo must be one of ss sg sr gs gg gr rs rg rr");
  const StrategySpec spec = StrategySpec::from_id(combo);

  Rng rng(seed);
  Population pop = initialize(spec, inst, config, rng);
  StaticRunResult result;
  result.combo = combo;
  result.reference_seed = pop.front().sol;

  for (int g = 1; g <= config.generations_static; ++g)
    pop = step_generation(pop, inst, config, rng);

  for (const Individual& ind : pop) {
    result.tour_conservation_pct.push_back(
        tour_conservation(result.reference_seed.tour, ind.sol.tour));
    result.packing_conservation_pct.push_back(
        packing_conservation(result.reference_seed.plan, ind.sol.plan, inst));
  }
  result.final_population = std::move(pop);
  return result;
}

void write_static_csv(std::ostream& out, const StaticRunResult& result) {
  out << "combo,member,tour_time,final_profit,tour_conservation_pct,packing_conservation_pct\n";
  for (std::size_t i = 0; i < result.final_population.size(); ++i) {
    const Individual& ind = result.final_population[i];
    out << result.combo << ',' << i << ',' << fmt_csv_double(ind.eval.tour_time) << ','
        << fmt_csv_double(ind.eval.final_profit) << ','
        << fmt_csv_double(result.tour_conservation_pct[i]) << ','
        << fmt_csv_double(result.packing_conservation_pct[i]) << '\n';
  }
}

std::vector<SnapshotValue> read_snapshot_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open snapshot CSV " + path.string());
  std::string line;
  int line_no = 0;
  if (!std::getline(in, line)) throw ParseError("empty snapshot CSV", 1);
  ++line_no;
  if (line + "\n" != kSnapshotCsvHeader)
    throw ParseError("unexpected snapshot CSV header '" + line + "'", 1);
  std::vector<SnapshotValue> out;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> cols;
    std::stringstream ss(line);
    std::string col;
    while (std::getline(ss, col, ',')) cols.push_back(col);
    if (cols.size() != 4)
      throw ParseError("snapshot row must have 4 columns", line_no);
    SnapshotValue v;
    parse_run_id(cols[0], v.strategy, v.schedule, v.repeat);
    v.interval = parse_int_tok(cols[1], line_no);
    v.hv = parse_double_tok(cols[2], line_no);
    v.spread = parse_double_tok(cols[3], line_no);
    out.push_back(std::move(v));
  }
  return out;
}

void write_rank_csv(std::ostream& out, const RankTable& table) {
  out << "strategy,interval,metric,median_rank\n";
  for (const RankRow& row : table.rows)
    out << row.strategy << ',' << row.interval << ',' << row.metric << ','
        << fmt_csv_double(row.median_rank) << '\n';
}

}  // namespace dttp
