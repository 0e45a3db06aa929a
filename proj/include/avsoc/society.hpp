// society.hpp : the artificial society world model. Vehicles move on a
// toroidal patch grid in discrete ticks; each tick every agent senses its
// sonar neighborhood, decides (random walk or the norm-compliance loop) and
// moves, after which collisions are counted pairwise. Agents update
// sequentially in ascending id order, so a run is deterministic for a given
// (config, seed) pair.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "avsoc/actors.hpp"
#include "avsoc/fear.hpp"
#include "avsoc/io.hpp"
#include "avsoc/norms.hpp"
#include "avsoc/rng.hpp"

namespace avsoc {

class config_error : public std::runtime_error {
 public:
  config_error(std::string key, const std::string& msg)
      : std::runtime_error(msg), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

// ---------------------------------------------------------------------------
// Configuration
// ---------------------------------------------------------------------------

struct WorldConfig {
  int num_avs = 10;
  int vehicle_ratio = 2;  // trucks:cars ratio r in "r:1"
  double min_velocity = 0.14;
  double max_velocity = 0.8;
  double acceleration_rate = 0.1;
  double deceleration_rate = 0.1;
  int safety_distance = 3;
  int sonar_range = 2;
  bool metacognition = false;  // false = random walk, true = norms mode
  double li = 0.1;             // fear slider constants injected per appraisal
  double ud = 0.1;
  double ig = 1.0;
  double world_size = 50.0;  // square torus side, patches
  int ticks_per_run = 1000;
  double collision_radius = 0.5;
  bool dynamic_appraisal = false;  // belief-driven fuzzy legs instead of sliders
  FearConfig fear;

  void validate() const {
    auto in01 = [](double v) { return v >= 0.0 && v <= 1.0; };
    if (num_avs < 1 || num_avs > 30)
      throw config_error("num_avs", "num_avs must be in [1,30]");
    if (vehicle_ratio != 2 && vehicle_ratio != 3 && vehicle_ratio != 4)
      throw config_error("vehicle_ratio", "vehicle_ratio must be 2, 3 or 4 (r:1)");
    if (!in01(min_velocity))
      throw config_error("min_velocity", "min_velocity must be in [0,1]");
    if (!in01(max_velocity) || max_velocity <= 0.0)
      throw config_error("max_velocity", "max_velocity must be in (0,1]");
    if (min_velocity > max_velocity)
      throw config_error("min_velocity", "min_velocity must not exceed max_velocity");
    if (!in01(acceleration_rate))
      throw config_error("acceleration_rate", "acceleration_rate must be in [0,1]");
    if (!in01(deceleration_rate))
      throw config_error("deceleration_rate", "deceleration_rate must be in [0,1]");
    if (safety_distance < 1 || safety_distance > 10)
      throw config_error("safety_distance", "safety_distance must be in [1,10]");
    if (sonar_range < 1 || sonar_range > 10)
      throw config_error("sonar_range", "sonar_range must be in [1,10]");
    if (!in01(li)) throw config_error("li", "li must be in [0,1]");
    if (!in01(ud)) throw config_error("ud", "ud must be in [0,1]");
    if (!in01(ig)) throw config_error("ig", "ig must be in [0,1]");
    if (world_size <= 0.0)
      throw config_error("world_size", "world_size must be positive");
    if (ticks_per_run < 0)
      throw config_error("ticks_per_run", "ticks_per_run must be nonnegative");
    if (collision_radius <= 0.0)
      throw config_error("collision_radius", "collision_radius must be positive");
    try {
      fear.validate();
    } catch (const std::invalid_argument& e) {
      throw config_error("fear", e.what());
    }
  }
};

// ---------------------------------------------------------------------------
// Torus geometry
// ---------------------------------------------------------------------------

/// Shortest signed displacement from a to b on a circle of the given size.
inline double torus_delta(double a, double b, double size) {
  return std::remainder(b - a, size);
}

inline double torus_distance(double ax, double ay, double bx, double by, double size) {
  double dx = torus_delta(ax, bx, size);
  double dy = torus_delta(ay, by, size);
  return std::sqrt(dx * dx + dy * dy);
}

inline double wrap_position(double x, double size) {
  double w = std::fmod(x, size);
  return w < 0.0 ? w + size : w;
}

inline double wrap_heading(double h) {
  double w = std::fmod(h, 2.0 * M_PI);
  return w < 0.0 ? w + 2.0 * M_PI : w;
}

// ---------------------------------------------------------------------------
// Agents and beliefs
// ---------------------------------------------------------------------------

struct NeighborSnapshot {
  int id = -1;
  ActorKindId kind = ActorKindId::Car3000cc;
  double distance = 0.0;
  double distance_norm = 0.0;   // distance / sonar range
  double relative_speed = 0.0;  // neighbor velocity minus own
  double relative_speed_norm = 0.0;
  double bearing = 0.0;  // radians relative to own heading, 0 = dead ahead
  bool ahead = false;
};

/// Situation awareness of one agent at one tick.
struct Belief {
  std::uint64_t tick = 0;
  Maneuver scenario = Maneuver::None;  // scenario id e_i
  std::optional<NeighborSnapshot> nearest;
  std::vector<NeighborSnapshot> in_sonar;
  bool pre_crash = false;  // nearest closer than the safety distance
  double self_speed_norm = 0.0;
};

struct VehicleAgent {
  int id = 0;
  ActorKindId kind = ActorKindId::Car3000cc;
  Personality personality;
  double x = 0.0, y = 0.0;
  double heading = 0.0;  // radians
  double velocity = 0.0;
  Belief belief;
  FearState fear;
  bool fear_valid = false;  // true once an appraisal ran this run
  long collisions = 0;
};

// ---------------------------------------------------------------------------
// Tracing
// ---------------------------------------------------------------------------

struct AgentTraceRow {
  std::uint64_t tick;
  int agent_id;
  std::string_view kind_symbol;
  double x, y, velocity;
  std::string_view mode;
  bool has_fw;
  double fw;
  std::string_view action;
  int collisions_this_tick;
};

struct FearTraceRow {
  std::uint64_t tick;
  int agent_id;
  FearState state;
};

struct Trace {
  std::vector<AgentTraceRow> agents;
  std::vector<FearTraceRow> fears;
};

inline std::string agent_trace_csv(const Trace& trace) {
  std::string out = "tick,agent_id,kind,x,y,velocity,mode,fw,action,collisions_this_tick\n";
  for (const auto& r : trace.agents) {
    out += std::to_string(r.tick) + "," + std::to_string(r.agent_id) + "," +
           std::string(r.kind_symbol) + "," + io::format_double(r.x) + "," +
           io::format_double(r.y) + "," + io::format_double(r.velocity) + "," +
           std::string(r.mode) + "," + (r.has_fw ? io::format_double(r.fw) : "") + "," +
           std::string(r.action) + "," + std::to_string(r.collisions_this_tick) + "\n";
  }
  return out;
}

inline std::string fear_trace_csv(const Trace& trace) {
  std::string out =
      "tick,agent_id,undesirability,likelihood,ig,potential,intensity,willingness\n";
  for (const auto& r : trace.fears) {
    out += std::to_string(r.tick) + "," + std::to_string(r.agent_id) + "," +
           io::format_double(r.state.undesirability) + "," +
           io::format_double(r.state.likelihood) + "," + io::format_double(r.state.ig) +
           "," + io::format_double(r.state.potential) + "," +
           io::format_double(r.state.intensity) + "," +
           io::format_double(r.state.willingness) + "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// World
// ---------------------------------------------------------------------------

struct CollisionEvent {
  int a, b;  // agent ids, a < b
};

struct TickReport {
  std::uint64_t tick = 0;
  int collisions = 0;
  std::vector<CollisionEvent> events;
};

struct World {
  WorldConfig cfg;
  std::vector<VehicleAgent> agents;
  std::uint64_t tick = 0;
  Weather weather = Weather::Bright;
  Rng rng;
  FisSet fis;
  std::set<std::pair<int, int>> contacts;  // pairs currently within collision radius
  Trace* trace = nullptr;                  // optional, not owned

  World(WorldConfig c, std::uint64_t seed)
      : cfg(std::move(c)), rng(seed), fis(FisSet::standard()) {}
};

/// Creates the society: kinds split trucks:cars by the configured ratio
/// (round half up), overlap-free positions, uniform headings and velocities.
/// Deterministic for a given seed.
inline World spawn_society(const WorldConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  World world(cfg, seed);
  int trucks = static_cast<int>(std::floor(
      static_cast<double>(cfg.num_avs) * cfg.vehicle_ratio / (cfg.vehicle_ratio + 1) +
      0.5));
  world.agents.reserve(cfg.num_avs);
  const int max_attempts = 1000;
  for (int i = 0; i < cfg.num_avs; ++i) {
    VehicleAgent agent;
    agent.id = i;
    agent.kind = i < trucks ? ActorKindId::Truck : ActorKindId::Car3000cc;
    agent.personality = default_personality(agent.kind);
    bool placed = false;
    for (int attempt = 0; attempt < max_attempts && !placed; ++attempt) {
      agent.x = world.rng.uniform(0.0, cfg.world_size);
      agent.y = world.rng.uniform(0.0, cfg.world_size);
      placed = true;
      for (const auto& other : world.agents) {
        if (torus_distance(agent.x, agent.y, other.x, other.y, cfg.world_size) <=
            cfg.collision_radius) {
          placed = false;
          break;
        }
      }
    }
    if (!placed)
      throw config_error("num_avs", "world too small to place agents without overlap");
    agent.heading = world.rng.uniform(0.0, 2.0 * M_PI);
    agent.velocity = world.rng.uniform(cfg.min_velocity, cfg.max_velocity);
    world.agents.push_back(agent);
  }
  return world;
}

// ---------------------------------------------------------------------------
// Sensing and scenario classification
// ---------------------------------------------------------------------------

inline Maneuver classify_maneuver(const std::optional<NeighborSnapshot>& nearest,
                                  double safety_distance) {
  if (!nearest) return Maneuver::None;
  if (nearest->ahead) {
    if (nearest->distance < safety_distance) return Maneuver::Tailgating;
    if (nearest->relative_speed < 0.0) return Maneuver::OvertakingRequest;
    return Maneuver::Following;
  }
  if (nearest->relative_speed > 0.0) return Maneuver::OvertakingRequest;
  return Maneuver::Leading;
}

/// Collects every neighbor within sonar range (torus metric). The nearest
/// neighbor is the minimum distance, ties broken toward the lower id; the
/// pre-crash flag is set when it sits inside the safety distance.
inline Belief sense(const World& world, const VehicleAgent& agent) {
  const auto& cfg = world.cfg;
  Belief belief;
  belief.tick = world.tick;
  belief.self_speed_norm = std::clamp(agent.velocity / cfg.max_velocity, 0.0, 1.0);
  for (const auto& other : world.agents) {
    if (other.id == agent.id) continue;
    double dx = torus_delta(agent.x, other.x, cfg.world_size);
    double dy = torus_delta(agent.y, other.y, cfg.world_size);
    double d = std::sqrt(dx * dx + dy * dy);
    if (d > cfg.sonar_range) continue;
    NeighborSnapshot snap;
    snap.id = other.id;
    snap.kind = other.kind;
    snap.distance = d;
    snap.distance_norm = std::clamp(d / cfg.sonar_range, 0.0, 1.0);
    snap.relative_speed = other.velocity - agent.velocity;
    snap.relative_speed_norm =
        std::clamp(std::abs(snap.relative_speed) / cfg.max_velocity, 0.0, 1.0);
    double raw = std::atan2(dy, dx) - agent.heading;
    snap.bearing = std::remainder(raw, 2.0 * M_PI);
    snap.ahead = std::abs(snap.bearing) < M_PI / 2.0;
    belief.in_sonar.push_back(snap);
    if (!belief.nearest || snap.distance < belief.nearest->distance)
      belief.nearest = snap;  // ascending id iteration keeps ties on the lower id
  }
  belief.pre_crash = belief.nearest && belief.nearest->distance < cfg.safety_distance;
  belief.scenario = classify_maneuver(belief.nearest, cfg.safety_distance);
  return belief;
}

// ---------------------------------------------------------------------------
// Decisions
// ---------------------------------------------------------------------------

/// Baseline mode: uniform heading perturbation in [-45deg, +45deg] and a
/// velocity perturbation within the acceleration rate. Ignores the belief.
inline Action decide_random_walk(const VehicleAgent&, const Belief&, Rng& rng,
                                 const WorldConfig& cfg) {
  Action a;
  a.kind = ActionKind::RandomTurn;
  a.heading_delta = rng.jitter(M_PI / 4.0);
  a.magnitude = rng.jitter(cfg.acceleration_rate);
  return a;
}

/// Belief-level matcher: derives the scenario facts from the belief and the
/// two actor kinds, then returns the first matching table row or the default
/// rule (distance keeping when the other dominates, keep course otherwise).
inline const NormRule& match_norm_rule(std::span<const NormRule> rules,
                                       const Belief& belief, ActorKindId self_kind,
                                       ActorKindId other_kind,
                                       Weather weather = Weather::Bright) {
  if (!belief.nearest) return kDefaultKeepCourseRule;
  ScenarioFacts facts;
  facts.maneuver = belief.scenario;
  facts.self_role = belief.nearest->ahead ? Role::Follower : Role::Leader;
  auto self_rank = static_cast<int>(dominance_of(self_kind));
  auto other_rank = static_cast<int>(dominance_of(other_kind));
  facts.other_rel = other_rank > self_rank   ? DominanceRel::Stronger
                    : other_rank < self_rank ? DominanceRel::Weaker
                                             : DominanceRel::Equal;
  facts.self_dominance = dominance_of(self_kind);
  facts.weather = weather;
  if (const NormRule* rule = match_scenario(rules, facts)) return *rule;
  return facts.other_rel == DominanceRel::Stronger ? kDefaultStrongerRule
                                                   : kDefaultKeepCourseRule;
}

struct NormDecision {
  Action action;
  const NormRule* rule = nullptr;
  bool appraised = false;
  FearState fear;
};

// Disobeying requires F_w strictly below lambda; an exact tie counts as
// compliance. The slider constants land exactly on the lambda boundaries
// (mean(0.1,0.1,1)-0.1 = 0.3 vs 0.3), so the comparison tolerates the
// rounding of the mean.
inline constexpr double kEgoistTieEpsilon = 1e-9;

namespace detail {

inline FearState appraise_for_agent(const Belief& belief, const FisSet& fis,
                                    const WorldConfig& cfg, double threshold) {
  if (!cfg.dynamic_appraisal)
    return fear_from_components(cfg.ud, cfg.li, cfg.ig, cfg.fear, threshold);
  // Dynamic mode: the likelihood and Ig legs run on the sensed situation
  // (sonar-normalized distance, own speed, proximity); the goal legs treat
  // collision-free travel as a maximally important, never-achieved goal.
  AppraisalInputs in;
  in.imp_goal = 1.0;
  in.ach_goal = 0.0;
  in.distance = belief.nearest ? belief.nearest->distance_norm : 1.0;
  in.speed = belief.self_speed_norm;
  in.sense_of_reality = 1.0;
  in.proximity = belief.nearest ? belief.nearest->distance_norm : 1.0;
  return appraise(in, fis, cfg.fear, threshold);
}

inline PredicateContext predicate_context(const VehicleAgent& agent,
                                          const Belief& belief, const WorldConfig& cfg) {
  PredicateContext ctx;
  if (belief.nearest) {
    ctx.nearest_distance = belief.nearest->distance;
    ctx.relative_speed = belief.nearest->relative_speed;
    ctx.bearing = belief.nearest->bearing;
  }
  ctx.velocity = agent.velocity;
  ctx.min_velocity = cfg.min_velocity;
  ctx.max_velocity = cfg.max_velocity;
  ctx.safety_distance = cfg.safety_distance;
  return ctx;
}

}  // namespace detail

/// The norm-compliance decision loop. Non-fear rules resolve to their comply
/// action without appraisal. Fear rules appraise (slider constants or the
/// dynamic fuzzy legs), compare F_w against the egoist threshold, escalate
/// once through the pre-crash branch (likelihood forced to 1), and gate the
/// comply action behind the rule's road-norm predicates.
inline NormDecision decide_norm(const VehicleAgent& agent, const Belief& belief,
                                const NormRule& rule, const FisSet& fis,
                                const WorldConfig& cfg) {
  NormDecision decision;
  decision.rule = &rule;
  if (!rule.fear_driven()) {
    decision.action = rule.comply;
    return decision;
  }
  double threshold = agent.personality.fear_threshold.value_or(cfg.fear.threshold);
  FearState fear = detail::appraise_for_agent(belief, fis, cfg, threshold);
  decision.appraised = true;
  if (fear.willingness < agent.personality.lambda - kEgoistTieEpsilon) {
    if (!belief.pre_crash) {
      // Egoist branch: the norm is disobeyed and the agent keeps its course.
      decision.fear = fear;
      decision.action = Action{ActionKind::KeepCourse, 1.0, 0.0};
      return decision;
    }
    // Pre-crash escalation: re-appraise once with certain likelihood.
    fear = fear_from_components(fear.undesirability, 1.0, fear.ig, cfg.fear, threshold);
    if (fear.willingness < agent.personality.lambda - kEgoistTieEpsilon) {
      decision.fear = fear;
      decision.action = Action{ActionKind::KeepCourse, 1.0, 0.0};
      return decision;
    }
  }
  decision.fear = fear;
  decision.action = road_norms_hold(rule, detail::predicate_context(agent, belief, cfg))
                        ? rule.comply
                        : rule.violate;
  return decision;
}

// ---------------------------------------------------------------------------
// Kinematics
// ---------------------------------------------------------------------------

/// Realizes an action and advances the agent one tick along its heading with
/// torus wrap. Velocity stays clamped to [min_velocity, max_velocity].
inline void apply_action(VehicleAgent& agent, const Action& action,
                         const WorldConfig& cfg) {
  auto clamp_v = [&](double v) {
    return std::clamp(v, cfg.min_velocity, cfg.max_velocity);
  };
  switch (action.kind) {
    case ActionKind::KeepCourse:
      break;
    case ActionKind::Decelerate:
      agent.velocity = clamp_v(agent.velocity - cfg.deceleration_rate * action.magnitude);
      break;
    case ActionKind::Accelerate:
      agent.velocity = clamp_v(agent.velocity + cfg.acceleration_rate * action.magnitude);
      break;
    case ActionKind::MaintainSafeDistance:
      if (agent.belief.nearest && agent.belief.nearest->distance < cfg.safety_distance)
        agent.velocity = clamp_v(agent.velocity - cfg.deceleration_rate * action.magnitude);
      break;
    case ActionKind::YieldPassage: {
      // Sidestep: slow down and displace 15 degrees off course for this tick
      // only; the heading itself is preserved.
      agent.velocity = clamp_v(agent.velocity - cfg.deceleration_rate * action.magnitude);
      double offset = agent.heading + 15.0 * M_PI / 180.0;
      agent.x = wrap_position(agent.x + agent.velocity * std::cos(offset), cfg.world_size);
      agent.y = wrap_position(agent.y + agent.velocity * std::sin(offset), cfg.world_size);
      return;
    }
    case ActionKind::RandomTurn:
      agent.heading = wrap_heading(agent.heading + action.heading_delta);
      agent.velocity = clamp_v(agent.velocity + action.magnitude);
      break;
  }
  agent.x = wrap_position(agent.x + agent.velocity * std::cos(agent.heading), cfg.world_size);
  agent.y = wrap_position(agent.y + agent.velocity * std::sin(agent.heading), cfg.world_size);
}

// ---------------------------------------------------------------------------
// Collisions
// ---------------------------------------------------------------------------

/// Collision events are contact episodes: a pair is counted on the tick its
/// torus distance first drops below the collision radius and is re-armed
/// only after the pair separates again. Both counters increment and the
/// agents keep moving (count-and-continue).
inline std::vector<CollisionEvent> detect_collisions(World& world) {
  std::vector<CollisionEvent> events;
  const double radius = world.cfg.collision_radius;
  for (std::size_t i = 0; i < world.agents.size(); ++i) {
    for (std::size_t j = i + 1; j < world.agents.size(); ++j) {
      auto& a = world.agents[i];
      auto& b = world.agents[j];
      bool close = torus_distance(a.x, a.y, b.x, b.y, world.cfg.world_size) < radius;
      auto key = std::make_pair(a.id, b.id);
      bool in_contact = world.contacts.count(key) > 0;
      if (close && !in_contact) {
        world.contacts.insert(key);
        events.push_back({a.id, b.id});
        ++a.collisions;
        ++b.collisions;
      } else if (!close && in_contact) {
        world.contacts.erase(key);
      }
    }
  }
  return events;
}

// ---------------------------------------------------------------------------
// Tick scheduler
// ---------------------------------------------------------------------------

/// One tick: agents sense/decide/move sequentially in ascending id order,
/// then collisions are detected. Fully deterministic given the seed.
inline TickReport step(World& world) {
  const auto& cfg = world.cfg;
  struct PendingRow {
    int agent_id;
    std::string_view symbol;
    double x, y, velocity;
    bool has_fw;
    double fw;
    std::string_view action;
  };
  std::vector<PendingRow> pending;
  if (world.trace) pending.reserve(world.agents.size());

  for (auto& agent : world.agents) {
    Belief belief = sense(world, agent);
    agent.belief = belief;  // MaintainSafeDistance reads it during apply
    Action action;
    bool has_fw = false;
    double fw = 0.0;
    if (!cfg.metacognition) {
      action = decide_random_walk(agent, belief, world.rng, cfg);
    } else if (belief.nearest) {
      const NormRule& rule =
          match_norm_rule(kNormRuleTable, belief, agent.kind, belief.nearest->kind,
                          world.weather);
      NormDecision decision = decide_norm(agent, belief, rule, world.fis, cfg);
      action = decision.action;
      if (decision.appraised) {
        agent.fear = decision.fear;
        agent.fear_valid = true;
        has_fw = true;
        fw = decision.fear.willingness;
        if (world.trace)
          world.trace->fears.push_back({world.tick, agent.id, decision.fear});
      }
    } else {
      action = Action{ActionKind::KeepCourse, 1.0, 0.0};
    }
    apply_action(agent, action, cfg);
    if (world.trace)
      pending.push_back({agent.id, actor_kind(agent.kind).symbol, agent.x, agent.y,
                         agent.velocity, has_fw, fw, action_name(action.kind)});
  }

  TickReport report;
  report.tick = world.tick;
  report.events = detect_collisions(world);
  report.collisions = static_cast<int>(report.events.size());

  if (world.trace) {
    std::vector<int> per_agent(world.agents.size(), 0);
    for (const auto& e : report.events) {
      ++per_agent[e.a];
      ++per_agent[e.b];
    }
    for (const auto& row : pending)
      world.trace->agents.push_back({world.tick, row.agent_id, row.symbol, row.x,
                                     row.y, row.velocity,
                                     cfg.metacognition ? "norms" : "random_walk",
                                     row.has_fw, row.fw, row.action,
                                     per_agent[row.agent_id]});
  }
  ++world.tick;
  return report;
}

/// Debug export, one agent per line.
inline std::string world_snapshot(const World& world) {
  std::string out;
  char buf[160];
  for (const auto& a : world.agents) {
    std::snprintf(buf, sizeof buf, "%d %s %.6f %.6f %.6f %.6f %ld\n", a.id,
                  std::string(actor_kind(a.kind).symbol).c_str(), a.x, a.y, a.heading,
                  a.velocity, a.collisions);
    out += buf;
  }
  return out;
}

}  // namespace avsoc
