// actors.hpp : the actor catalog of the artificial society and the social
// personality (dominance class, egoist threshold) attached to each vehicle.
#pragma once

#include <array>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string_view>

namespace avsoc {

// Ordered by social influence; comparisons use the numeric rank.
enum class Dominance {
  VeryWeakDominating = 0,
  WeakDominating = 1,
  Dominating = 2,
  VeryDominating = 3,
};

inline constexpr std::string_view dominance_name(Dominance d) {
  switch (d) {
    case Dominance::VeryWeakDominating: return "VeryWeakDominating";
    case Dominance::WeakDominating: return "WeakDominating";
    case Dominance::Dominating: return "Dominating";
    case Dominance::VeryDominating: return "VeryDominating";
  }
  return "?";
}

enum class ActorKindId {
  Truck = 0,
  Bus,
  ToyotaSmallTruck,
  Carry,
  Car3000cc,
  Car2000cc,
  Rickshaw,
  Ambulance,
  Motorbike,
  Cycle,
};

struct ActorKind {
  std::string_view name;
  std::string_view symbol;
  Dominance dominance;
  double weight_lo;  // kg
  double weight_hi;
};

inline constexpr double kOpenWeight = std::numeric_limits<double>::infinity();

inline constexpr std::array<ActorKind, 10> kActorCatalog{{
    {"AV_Truck", "T", Dominance::VeryDominating, 5000.0, kOpenWeight},
    {"AV_Bus", "B", Dominance::VeryDominating, 4500.0, 50000.0},
    {"AV_Toyota_Small_truck", "TY", Dominance::Dominating, 3000.0, 4000.0},
    {"AV_Carry", "C", Dominance::WeakDominating, 2000.0, 2800.0},
    {"AV_Car3000cc", "CB", Dominance::WeakDominating, 2000.0, 2500.0},
    {"AV_Car2000cc", "CS", Dominance::WeakDominating, 1500.0, 1700.0},
    {"AV_Rickshaw", "R", Dominance::WeakDominating, 1200.0, 1400.0},
    {"AV_Ambulance", "A", Dominance::WeakDominating, 1200.0, 1400.0},
    {"AV_Motorbike", "M", Dominance::VeryWeakDominating, 800.0, 1100.0},
    {"AV_Cycle", "CL", Dominance::VeryWeakDominating, 400.0, 400.0},
}};

inline constexpr const ActorKind& actor_kind(ActorKindId id) {
  return kActorCatalog[static_cast<std::size_t>(id)];
}

inline constexpr Dominance dominance_of(ActorKindId id) {
  return actor_kind(id).dominance;
}

/// Default egoist threshold by dominance class. Monotone: stronger actors
/// need more fear before they comply. Config-overridable defaults.
inline constexpr double default_lambda(Dominance d) {
  switch (d) {
    case Dominance::VeryDominating: return 0.6;
    case Dominance::Dominating: return 0.45;
    case Dominance::WeakDominating: return 0.3;
    case Dominance::VeryWeakDominating: return 0.15;
  }
  return 0.3;
}

struct Personality {
  Dominance dominance = Dominance::WeakDominating;
  double lambda = 0.3;  // egoist threshold; F_w below it means disobey
  std::optional<double> fear_threshold;  // per-agent override

  void validate() const {
    if (lambda < 0.0 || lambda > 1.0)
      throw std::invalid_argument("Personality: lambda outside [0,1]");
  }
};

inline Personality default_personality(ActorKindId id) {
  Dominance d = dominance_of(id);
  return Personality{d, default_lambda(d), std::nullopt};
}

}  // namespace avsoc
