#include "dttp/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include <json.hpp>

namespace dttp {

namespace {

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

/// Round half to even, the tie rule used for percentage-of-items counts.
int round_half_even(double x) { return static_cast<int>(std::nearbyint(x)); }

}  // namespace

std::string to_string(DynamicsKind kind) {
  switch (kind) {
    case DynamicsKind::Loc: return "loc";
    case DynamicsKind::Ava: return "ava";
    case DynamicsKind::Val: return "val";
  }
  throw ConfigError("unreachable dynamics kind");
}

DynamicsKind dynamics_kind_from(const std::string& s) {
  if (s == "loc" || s == "Loc") return DynamicsKind::Loc;
  if (s == "ava" || s == "Ava") return DynamicsKind::Ava;
  if (s == "val" || s == "Val") return DynamicsKind::Val;
  throw ConfigError("unknown dynamics kind '" + s + "' (expected loc|ava|val)");
}

DynamicsConfig DynamicsConfig::defaults(DynamicsKind kind) {
  DynamicsConfig c;
  c.kind = kind;
  c.magnitude = kind == DynamicsKind::Loc ? 2.0 : 5.0;
  return c;
}

std::string DynamicsConfig::canonical_string() const {
  return "kind=" + to_string(kind) + ";magnitude=" + fmt17(magnitude) +
         ";cf=" + fmt17(change_factor) + ";period=" + std::to_string(period) +
         ";changes=" + std::to_string(n_changes);
}

void validate_config(const DynamicsConfig& config, const TtpInstance& inst) {
  if (config.period < 1) throw ConfigError("period must be >= 1");
  if (config.n_changes < 1) throw ConfigError("n_changes must be >= 1");
  if (config.kind == DynamicsKind::Loc) {
    if (config.magnitude < 1.0 || config.magnitude >= inst.n_cities() ||
        config.magnitude != std::floor(config.magnitude))
      throw ConfigError("Loc magnitude must be an integer city count in [1, N)");
  } else {
    if (!(config.magnitude > 0.0 && config.magnitude <= 100.0))
      throw ConfigError("Ava/Val magnitude must be a percentage in (0, 100]");
  }
  if (config.kind == DynamicsKind::Val &&
      !(config.change_factor > 0.0 && config.change_factor < 1.0))
    throw ConfigError("change factor must lie in (0, 1)");
  magnitude_count(config, inst);
}

int magnitude_count(const DynamicsConfig& config, const TtpInstance& inst) {
  if (config.kind == DynamicsKind::Loc) return static_cast<int>(config.magnitude);
  const int k = round_half_even(config.magnitude / 100.0 * inst.n_items());
  if (k == 0)
    throw ConfigError("magnitude " + fmt17(config.magnitude) +
                      "% of " + std::to_string(inst.n_items()) + " items rounds to zero");
  return k;
}

FeasibleRegion feasible_region(const TtpInstance& inst) {
  FeasibleRegion r;
  r.x.lo = r.x.hi = inst.cities()[0].x;
  r.y.lo = r.y.hi = inst.cities()[0].y;
  for (const City& c : inst.cities()) {
    r.x.lo = std::min(r.x.lo, c.x);
    r.x.hi = std::max(r.x.hi, c.x);
    r.y.lo = std::min(r.y.lo, c.y);
    r.y.hi = std::max(r.y.hi, c.y);
  }
  const double lx = r.x.hi - r.x.lo;
  const double ly = r.y.hi - r.y.lo;
  r.x.lo = std::max(0.0, r.x.lo - 0.05 * lx);
  r.x.hi = r.x.hi + 0.05 * lx;
  r.y.lo = std::max(0.0, r.y.lo - 0.05 * ly);
  r.y.hi = r.y.hi + 0.05 * ly;
  return r;
}

ChangeSchedule generate_schedule(const TtpInstance& inst,
                                 const DynamicsConfig& config,
                                 std::uint64_t seed) {
  validate_config(config, inst);
  const int count = magnitude_count(config, inst);
  const FeasibleRegion region = feasible_region(inst);

  Rng rng(mix_seed(seed, fnv1a64(config.canonical_string())));
  ChangeSchedule schedule;
  schedule.kind = config.kind;
  schedule.seed = seed;
  schedule.config = config;

  for (int e = 1; e <= config.n_changes; ++e) {
    ChangeEvent event;
    event.at_generation = e * config.period;
    if (config.kind == DynamicsKind::Val) event.change_factor = config.change_factor;
    switch (config.kind) {
      case DynamicsKind::Loc: {
        for (int city : rng.sample_ids(inst.n_cities(), count)) {
          const double x = rng.uniform_real(region.x.lo, region.x.hi);
          const double y = rng.uniform_real(region.y.lo, region.y.hi);
          event.loc.push_back(LocMove{city, x, y});
        }
        break;
      }
      case DynamicsKind::Ava: {
        for (int item : rng.sample_ids(inst.n_items(), count)) {
          const int city = static_cast<int>(rng.uniform_int(1, inst.n_cities()));
          event.ava.push_back(AvaMove{item, city});
        }
        break;
      }
      case DynamicsKind::Val: {
        for (int item : rng.sample_ids(inst.n_items(), count)) {
          const int sign = rng.uniform_int(0, 1) == 0 ? -1 : 1;
          event.val.push_back(ValMove{item, sign});
        }
        break;
      }
    }
    schedule.events.push_back(std::move(event));
  }
  return schedule;
}

TtpInstance apply_change(const TtpInstance& inst, const ChangeEvent& event) {
  if (!event.loc.empty()) {
    std::vector<std::tuple<int, double, double>> moves;
    moves.reserve(event.loc.size());
    for (const LocMove& m : event.loc) moves.emplace_back(m.city, m.x, m.y);
    return inst.moved(moves);
  }
  if (!event.ava.empty()) {
    std::vector<std::pair<int, int>> moves;
    moves.reserve(event.ava.size());
    for (const AvaMove& m : event.ava) moves.emplace_back(m.item, m.city);
    return inst.reassigned(moves);
  }
  if (!event.val.empty()) {
    if (!(event.change_factor > 0.0 && event.change_factor < 1.0))
      throw ValidationError("Val event is missing a valid change factor");
    std::vector<std::pair<int, double>> factors;
    factors.reserve(event.val.size());
    for (const ValMove& m : event.val) {
      if (m.sign != 1 && m.sign != -1)
        throw ValidationError("Val sign must be -1 or +1");
      factors.emplace_back(m.item, 1.0 + m.sign * event.change_factor);
    }
    return inst.rescaled(factors);
  }
  return inst;  // empty event
}

void validate_schedule(const ChangeSchedule& schedule, const TtpInstance& inst) {
  validate_config(schedule.config, inst);
  if (schedule.kind != schedule.config.kind)
    throw ValidationError("schedule kind disagrees with its config");
  const FeasibleRegion region = feasible_region(inst);
  int prev_gen = 0;
  for (const ChangeEvent& event : schedule.events) {
    if (event.at_generation <= prev_gen)
      throw ValidationError("event generations must be strictly increasing and > 0");
    prev_gen = event.at_generation;
    switch (schedule.kind) {
      case DynamicsKind::Loc:
        if (event.loc.empty() || !event.ava.empty() || !event.val.empty())
          throw ValidationError("Loc schedule carries a non-Loc event");
        for (const LocMove& m : event.loc) {
          if (m.city < 1 || m.city > inst.n_cities())
            throw ValidationError("Loc event city id out of range for this instance");
          if (m.x < region.x.lo - 1e-9 || m.x > region.x.hi + 1e-9 ||
              m.y < region.y.lo - 1e-9 || m.y > region.y.hi + 1e-9)
            throw ValidationError("Loc event coordinates outside the feasible region");
        }
        break;
      case DynamicsKind::Ava:
        if (event.ava.empty() || !event.loc.empty() || !event.val.empty())
          throw ValidationError("Ava schedule carries a non-Ava event");
        for (const AvaMove& m : event.ava) {
          if (m.item < 1 || m.item > inst.n_items())
            throw ValidationError("Ava event item id out of range for this instance");
          if (m.city < 1 || m.city > inst.n_cities())
            throw ValidationError("Ava event city id out of range for this instance");
        }
        break;
      case DynamicsKind::Val:
        if (event.val.empty() || !event.loc.empty() || !event.ava.empty())
          throw ValidationError("Val schedule carries a non-Val event");
        for (const ValMove& m : event.val) {
          if (m.item < 1 || m.item > inst.n_items())
            throw ValidationError("Val event item id out of range for this instance");
          if (m.sign != -1 && m.sign != 1)
            throw ValidationError("Val event sign must be -1 or +1");
        }
        break;
    }
  }
}

namespace {

nlohmann::json config_to_json(const DynamicsConfig& c) {
  return nlohmann::json{{"kind", to_string(c.kind)},
                        {"magnitude", c.magnitude},
                        {"change_factor", c.change_factor},
                        {"period", c.period},
                        {"n_changes", c.n_changes}};
}

DynamicsConfig config_from_json(const nlohmann::json& j) {
  DynamicsConfig c;
  c.kind = dynamics_kind_from(j.at("kind").get<std::string>());
  c.magnitude = j.at("magnitude").get<double>();
  c.change_factor = j.at("change_factor").get<double>();
  c.period = j.at("period").get<int>();
  c.n_changes = j.at("n_changes").get<int>();
  return c;
}

}  // namespace

void print_schedule(const ChangeSchedule& schedule, std::ostream& out) {
  nlohmann::json events = nlohmann::json::array();
  for (const ChangeEvent& e : schedule.events) {
    nlohmann::json je{{"generation", e.at_generation}};
    switch (schedule.kind) {
      case DynamicsKind::Loc: {
        nlohmann::json moves = nlohmann::json::array();
        for (const LocMove& m : e.loc)
          moves.push_back({{"city", m.city}, {"x", m.x}, {"y", m.y}});
        je["moves"] = std::move(moves);
        break;
      }
      case DynamicsKind::Ava: {
        nlohmann::json moves = nlohmann::json::array();
        for (const AvaMove& m : e.ava)
          moves.push_back({{"item", m.item}, {"city", m.city}});
        je["moves"] = std::move(moves);
        break;
      }
      case DynamicsKind::Val: {
        nlohmann::json moves = nlohmann::json::array();
        for (const ValMove& m : e.val)
          moves.push_back({{"item", m.item}, {"sign", m.sign}});
        je["moves"] = std::move(moves);
        break;
      }
    }
    events.push_back(std::move(je));
  }
  nlohmann::json j{{"kind", to_string(schedule.kind)},
                   {"seed", schedule.seed},
                   {"config", config_to_json(schedule.config)},
                   {"events", std::move(events)}};
  out << j.dump(2) << "\n";
}

ChangeSchedule parse_schedule(std::istream& in) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("schedule is not valid JSON: ") + e.what());
  }
  try {
    ChangeSchedule s;
    s.kind = dynamics_kind_from(j.at("kind").get<std::string>());
    s.seed = j.at("seed").get<std::uint64_t>();
    s.config = config_from_json(j.at("config"));
    for (const auto& je : j.at("events")) {
      ChangeEvent e;
      e.at_generation = je.at("generation").get<int>();
      if (s.kind == DynamicsKind::Val) e.change_factor = s.config.change_factor;
      for (const auto& jm : je.at("moves")) {
        switch (s.kind) {
          case DynamicsKind::Loc:
            e.loc.push_back(LocMove{jm.at("city").get<int>(), jm.at("x").get<double>(),
                                    jm.at("y").get<double>()});
            break;
          case DynamicsKind::Ava:
            e.ava.push_back(AvaMove{jm.at("item").get<int>(), jm.at("city").get<int>()});
            break;
          case DynamicsKind::Val:
            e.val.push_back(ValMove{jm.at("item").get<int>(), jm.at("sign").get<int>()});
            break;
        }
      }
      s.events.push_back(std::move(e));
    }
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed schedule field: ") + e.what());
  }
}

void save_schedule(const ChangeSchedule& schedule, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write schedule file " + path.string());
  print_schedule(schedule, out);
  if (!out) throw Error("failed writing schedule file " + path.string());
}

ChangeSchedule load_schedule(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open schedule file " + path.string());
  return parse_schedule(in);
}

}  // namespace dttp
