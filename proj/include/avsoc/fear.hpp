// fear.hpp : prospect-based fear pipeline. Combines undesirability,
// likelihood and Ig into a fear potential, gates it through the fear
// threshold, and exposes the norm-compliance willingness F_w.
#pragma once

#include <array>
#include <cmath>
#include <stdexcept>

#include "avsoc/fuzzy.hpp"

namespace avsoc {

enum class FearCombiner { ArithmeticMean, Min, Product };

struct FearConfig {
  double threshold = 0.1;
  FearCombiner combiner = FearCombiner::ArithmeticMean;
  // Per-input weights (undesirability, likelihood, ig); arithmetic mean only.
  std::array<double, 3> weights{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};

  void validate() const {
    if (threshold < 0.0 || threshold > 1.0)
      throw std::invalid_argument("FearConfig: threshold outside [0,1]");
    double sum = 0.0;
    for (double w : weights) {
      if (w < 0.0) throw std::invalid_argument("FearConfig: negative weight");
      sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-9)
      throw std::invalid_argument("FearConfig: weights must sum to 1");
  }
};

/// One appraisal snapshot. willingness == intensity; intensity is zero
/// unless potential strictly exceeds the threshold.
struct FearState {
  double undesirability = 0.0;
  double likelihood = 0.0;
  double ig = 0.0;
  double potential = 0.0;
  double threshold = 0.0;
  double intensity = 0.0;
  double willingness = 0.0;
};

/// Combined strength of the three appraisal inputs. Monotone nondecreasing
/// in each input for every combiner.
inline double fear_potential(double undesirability, double likelihood, double ig,
                             const FearConfig& cfg) {
  switch (cfg.combiner) {
    case FearCombiner::ArithmeticMean:
      return cfg.weights[0] * undesirability + cfg.weights[1] * likelihood +
             cfg.weights[2] * ig;
    case FearCombiner::Min:
      return std::min(undesirability, std::min(likelihood, ig));
    case FearCombiner::Product:
      return undesirability * likelihood * ig;
  }
  return 0.0;
}

/// Gated subtraction: potential - threshold when strictly above, else 0.
inline double fear_intensity(double potential, double threshold) {
  return potential > threshold ? potential - threshold : 0.0;
}

/// F_w(obey-norm). Identity on intensity; kept as an operation so alternative
/// willingness functions are a one-point change.
inline double willingness(double intensity) { return intensity; }

inline FearState fear_from_components(double undesirability, double likelihood,
                                      double ig, const FearConfig& cfg,
                                      double threshold) {
  FearState s;
  s.undesirability = undesirability;
  s.likelihood = likelihood;
  s.ig = ig;
  s.threshold = threshold;
  s.potential = fear_potential(undesirability, likelihood, ig, cfg);
  s.intensity = fear_intensity(s.potential, threshold);
  s.willingness = willingness(s.intensity);
  return s;
}

inline FearState fear_from_components(double undesirability, double likelihood,
                                      double ig, const FearConfig& cfg) {
  return fear_from_components(undesirability, likelihood, ig, cfg, cfg.threshold);
}

/// The three inference systems feeding the appraisal.
struct FisSet {
  fuzzy::FuzzyInferenceSystem undesirability;
  fuzzy::FuzzyInferenceSystem likelihood;
  fuzzy::FuzzyInferenceSystem ig;

  static FisSet standard(const fuzzy::PeakSet& peaks = fuzzy::kCalibratedPeaks) {
    return FisSet{fuzzy::build_undesirability_fis(peaks),
                  fuzzy::build_likelihood_fis(peaks), fuzzy::build_ig_fis(peaks)};
  }
};

/// Raw appraisal inputs, all normalized to [0,1] before this call.
struct AppraisalInputs {
  double imp_goal = 0.0;
  double ach_goal = 0.0;
  double distance = 0.0;  // normalized by sonar range
  double speed = 0.0;     // normalized by max velocity
  double sense_of_reality = 0.0;
  double proximity = 0.0;  // normalized distance; 0 = imminent
};

/// Full fear appraisal: runs the three fuzzy legs, then chains potential,
/// intensity and willingness. Pure; the returned state carries every
/// intermediate for logging.
inline FearState appraise(const AppraisalInputs& in, const FisSet& fis,
                          const FearConfig& cfg, double threshold) {
  double ud = fis.undesirability.infer(in.imp_goal, in.ach_goal);
  double lh = fis.likelihood.infer(in.distance, in.speed);
  double ig = fis.ig.infer(in.sense_of_reality, in.proximity);
  return fear_from_components(ud, lh, ig, cfg, threshold);
}

inline FearState appraise(const AppraisalInputs& in, const FisSet& fis,
                          const FearConfig& cfg) {
  return appraise(in, fis, cfg, cfg.threshold);
}

}  // namespace avsoc
