// norms.hpp : social-norm interaction rules of the artificial society.
//
// Each rule pairs a road scenario pattern (who leads, relative dominance,
// maneuver, weather) with a social norm, the emotion that sustains it, the
// road-norm predicates p (and optionally q) gating compliance, and the
// kinematic actions for the comply and violate branches. A social norm is
// acted on only when its road-norm predicates hold; rules whose emotion set
// lacks fear are inert and resolve to their comply action without appraisal.
//
// The informal road norms are realized as distance/heading predicates:
//   TwoSecondRule   safe headway attainable at minimum speed
//                   (nearest distance >= 2 * min velocity)
//   SpeedGap        a speed change can restore the gap: the closing speed is
//                   within the adjustable velocity band
//   LaneKeep        complying needs no lane departure (neighbor is not dead
//                   ahead, within +/-15 deg, inside the safety gap)
//   NoBusLane       neighbor is not abeam in the adjacent-lane sector
//                   (bearing within 15 deg of +/-90 deg)
//   AssistOvertake  an overtaking closure actually exists (nonzero speed
//                   difference with the neighbor)
#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <span>
#include <string_view>

#include "avsoc/actors.hpp"

namespace avsoc {

enum class ActionKind {
  KeepCourse,
  Decelerate,
  Accelerate,
  YieldPassage,
  MaintainSafeDistance,
  RandomTurn,
};

inline constexpr std::string_view action_name(ActionKind k) {
  switch (k) {
    case ActionKind::KeepCourse: return "keep_course";
    case ActionKind::Decelerate: return "decelerate";
    case ActionKind::Accelerate: return "accelerate";
    case ActionKind::YieldPassage: return "yield_passage";
    case ActionKind::MaintainSafeDistance: return "maintain_safe_distance";
    case ActionKind::RandomTurn: return "random_turn";
  }
  return "?";
}

struct Action {
  ActionKind kind = ActionKind::KeepCourse;
  double magnitude = 1.0;      // scales the config accel/decel rate
  double heading_delta = 0.0;  // radians, RandomTurn only
};

enum class Maneuver { None, Following, OvertakingRequest, Tailgating, Leading };

inline constexpr std::string_view maneuver_name(Maneuver m) {
  switch (m) {
    case Maneuver::None: return "none";
    case Maneuver::Following: return "following";
    case Maneuver::OvertakingRequest: return "overtaking-request";
    case Maneuver::Tailgating: return "tailgating";
    case Maneuver::Leading: return "leading";
  }
  return "?";
}

enum class Weather { Bright, Rainy };
enum class Emotion { Fear, Sympathy, Guilt, Shame };
enum class Role { Leader, Follower };
enum class DominanceRel { Any, Stronger, Weaker, Equal };

enum class RoadPredicate {
  None,
  TwoSecondRule,
  SpeedGap,
  LaneKeep,
  NoBusLane,
  AssistOvertake,
};

/// Scenario summary the matcher runs on, derived from the deciding agent's
/// belief. `other_rel` is the neighbor's dominance relative to self.
struct ScenarioFacts {
  Maneuver maneuver = Maneuver::None;
  Role self_role = Role::Follower;
  DominanceRel other_rel = DominanceRel::Equal;
  Dominance self_dominance = Dominance::WeakDominating;
  Weather weather = Weather::Bright;
};

/// Inputs to road-norm predicate evaluation, all from the deciding agent's
/// belief and kinematic state.
struct PredicateContext {
  double nearest_distance = 0.0;
  double relative_speed = 0.0;  // neighbor velocity minus own
  double bearing = 0.0;         // radians, 0 = dead ahead
  double velocity = 0.0;
  double min_velocity = 0.0;
  double max_velocity = 1.0;
  double safety_distance = 0.0;
};

struct NormRule {
  std::string_view id;
  std::string_view social_norm;
  Role self_role;
  DominanceRel other_rel;
  std::optional<Dominance> self_class;  // extra filter for equal-dominance rows
  Maneuver maneuver;
  std::optional<Weather> condition;  // nullopt matches any weather
  std::array<Emotion, 3> emotions;
  int emotion_count;
  RoadPredicate p = RoadPredicate::None;
  RoadPredicate q = RoadPredicate::None;
  Action comply;
  Action violate;

  constexpr bool fear_driven() const {
    for (int i = 0; i < emotion_count; ++i)
      if (emotions[i] == Emotion::Fear) return true;
    return false;
  }
};

namespace detail {
inline constexpr Action kKeepCourse{ActionKind::KeepCourse, 1.0, 0.0};
inline constexpr Action kMaintain{ActionKind::MaintainSafeDistance, 1.0, 0.0};
inline constexpr Action kYield{ActionKind::YieldPassage, 1.0, 0.0};
}  // namespace detail

/// The interaction rule table, one entry per scenario row, in fixed order.
inline constexpr std::array<NormRule, 8> kNormRuleTable{{
    // 1. Strong leader, weaker follower asks to pass.
    {"help-the-weaker", "Help the weaker", Role::Leader, DominanceRel::Weaker,
     std::nullopt, Maneuver::OvertakingRequest, std::nullopt,
     {Emotion::Sympathy, Emotion::Guilt, Emotion::Shame}, 3,
     RoadPredicate::AssistOvertake, RoadPredicate::LaneKeep, detail::kMaintain,
     detail::kKeepCourse},
    // 2. Weak leader, stronger follower asks to pass.
    {"maintain-distance-from-stronger", "Maintain distance from stronger one",
     Role::Leader, DominanceRel::Stronger, std::nullopt,
     Maneuver::OvertakingRequest, std::nullopt, {Emotion::Fear}, 1,
     RoadPredicate::NoBusLane, RoadPredicate::AssistOvertake, detail::kYield,
     detail::kKeepCourse},
    // 3. Car behind car wants to pass.
    {"tit-for-tat", "Give the right or Tit for Tat", Role::Follower,
     DominanceRel::Equal, Dominance::WeakDominating, Maneuver::OvertakingRequest,
     std::nullopt, {Emotion::Guilt, Emotion::Shame, Emotion::Sympathy}, 3,
     RoadPredicate::NoBusLane, RoadPredicate::AssistOvertake, detail::kMaintain,
     detail::kKeepCourse},
    // 4. Heavy vehicle behind an equally heavy one wants to pass.
    {"tit-for-tat-heavy", "Give the right or Tit for Tat", Role::Follower,
     DominanceRel::Equal, Dominance::VeryDominating, Maneuver::OvertakingRequest,
     std::nullopt, {Emotion::Fear, Emotion::Guilt, Emotion::Shame}, 3,
     RoadPredicate::SpeedGap, RoadPredicate::AssistOvertake, detail::kYield,
     detail::kKeepCourse},
    // 5. Weaker following stronger, bright conditions.
    {"keep-distance-from-stronger-bright", "Keep the distance from stronger one",
     Role::Follower, DominanceRel::Stronger, std::nullopt, Maneuver::Following,
     Weather::Bright, {Emotion::Fear}, 1, RoadPredicate::TwoSecondRule,
     RoadPredicate::None, detail::kMaintain, detail::kKeepCourse},
    // 6. Weaker following stronger, rainy conditions.
    {"keep-distance-from-stronger-rainy", "Keep the distance from stronger one",
     Role::Follower, DominanceRel::Stronger, std::nullopt, Maneuver::Following,
     Weather::Rainy, {Emotion::Fear}, 1, RoadPredicate::TwoSecondRule,
     RoadPredicate::None, detail::kMaintain, detail::kKeepCourse},
    // 7. Weaker tailgating stronger.
    {"keep-distance-tailgating-weaker", "Keep the distance from stronger one",
     Role::Follower, DominanceRel::Stronger, std::nullopt, Maneuver::Tailgating,
     std::nullopt, {Emotion::Fear}, 1, RoadPredicate::SpeedGap,
     RoadPredicate::None, detail::kYield, detail::kKeepCourse},
    // 8. Stronger tailgating weaker.
    {"keep-distance-abide-the-rule", "Keep the distance from stronger one, Abide the rule",
     Role::Follower, DominanceRel::Weaker, std::nullopt, Maneuver::Tailgating,
     std::nullopt, {Emotion::Fear}, 1, RoadPredicate::SpeedGap,
     RoadPredicate::NoBusLane, detail::kYield, detail::kKeepCourse},
}};

/// Fallback when no table row matches: fear-backed distance keeping when the
/// neighbor dominates, plain keep-course otherwise.
inline constexpr NormRule kDefaultStrongerRule{
    "maintain-distance-from-stronger-default", "Maintain distance from stronger one",
    Role::Follower, DominanceRel::Stronger, std::nullopt, Maneuver::None,
    std::nullopt, {Emotion::Fear}, 1, RoadPredicate::None, RoadPredicate::None,
    detail::kMaintain, detail::kKeepCourse};

inline constexpr NormRule kDefaultKeepCourseRule{
    "keep-course-default", "Keep course", Role::Follower, DominanceRel::Any,
    std::nullopt, Maneuver::None, std::nullopt, {Emotion::Sympathy}, 0,
    RoadPredicate::None, RoadPredicate::None, detail::kKeepCourse,
    detail::kKeepCourse};

/// First rule (in table order) whose pattern matches, or null.
inline const NormRule* match_scenario(std::span<const NormRule> rules,
                                      const ScenarioFacts& facts) {
  for (const auto& r : rules) {
    if (r.self_role != facts.self_role) continue;
    if (r.maneuver != facts.maneuver) continue;
    if (r.other_rel != DominanceRel::Any && r.other_rel != facts.other_rel) continue;
    if (r.self_class && *r.self_class != facts.self_dominance) continue;
    if (r.condition && *r.condition != facts.weather) continue;
    return &r;
  }
  return nullptr;
}

inline bool road_predicate_holds(RoadPredicate p, const PredicateContext& ctx) {
  constexpr double kDeg15 = 15.0 * M_PI / 180.0;
  switch (p) {
    case RoadPredicate::None:
      return true;
    case RoadPredicate::TwoSecondRule:
      return ctx.nearest_distance >= 2.0 * ctx.min_velocity;
    case RoadPredicate::SpeedGap:
      return std::abs(ctx.relative_speed) <= ctx.max_velocity - ctx.min_velocity;
    case RoadPredicate::LaneKeep:
      return !(std::abs(ctx.bearing) < kDeg15 &&
               ctx.nearest_distance < ctx.safety_distance);
    case RoadPredicate::NoBusLane:
      return std::abs(std::abs(ctx.bearing) - M_PI / 2.0) > kDeg15;
    case RoadPredicate::AssistOvertake:
      return std::abs(ctx.relative_speed) > 0.0;
  }
  return true;
}

/// Conjunction gate: the social norm is followed only when p (and q when
/// present) hold.
inline bool road_norms_hold(const NormRule& rule, const PredicateContext& ctx) {
  return road_predicate_holds(rule.p, ctx) && road_predicate_holds(rule.q, ctx);
}

}  // namespace avsoc
