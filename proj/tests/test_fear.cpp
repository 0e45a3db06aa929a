#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "avsoc/fear.hpp"
#include "avsoc/rng.hpp"

using namespace avsoc;
using Catch::Approx;

TEST_CASE("fear potential combiners", "[fear]") {
  FearConfig cfg;
  CHECK(fear_potential(0.6, 0.6, 0.6, cfg) == Approx(0.6));
  CHECK(fear_potential(0.9, 0.8, 1.0, cfg) == Approx(0.9));
  for (auto combiner : {FearCombiner::ArithmeticMean, FearCombiner::Min, FearCombiner::Product}) {
    cfg.combiner = combiner;
    CHECK(fear_potential(0.0, 0.0, 0.0, cfg) == 0.0);
  }
  cfg.combiner = FearCombiner::Min;
  CHECK(fear_potential(0.2, 0.7, 0.9, cfg) == Approx(0.2));
  cfg.combiner = FearCombiner::Product;
  CHECK(fear_potential(0.5, 0.5, 0.5, cfg) == Approx(0.125));
  cfg.combiner = FearCombiner::ArithmeticMean;
  cfg.weights = {0.5, 0.25, 0.25};
  CHECK(fear_potential(1.0, 0.0, 0.0, cfg) == Approx(0.5));
}

TEST_CASE("fear intensity gates on a strict threshold", "[fear]") {
  CHECK(fear_intensity(0.9, 0.1) == Approx(0.8));
  CHECK(fear_intensity(0.05, 0.1) == 0.0);
  CHECK(fear_intensity(0.1, 0.1) == 0.0);  // strict inequality
}

TEST_CASE("willingness is the identity on intensity", "[fear]") {
  CHECK(willingness(0.8) == 0.8);
  CHECK(willingness(0.0) == 0.0);
  CHECK(willingness(1.0) == 1.0);
}

TEST_CASE("gating property over random pairs", "[fear]") {
  Rng rng(99);
  for (int i = 0; i < 10000; ++i) {
    double potential = rng.uniform();
    double threshold = rng.uniform();
    double intensity = fear_intensity(potential, threshold);
    if (potential <= threshold) {
      CHECK(intensity == 0.0);
    } else {
      CHECK(intensity > 0.0);
      CHECK(intensity + threshold == potential);  // exact
    }
  }
}

TEST_CASE("slider constants chain to the documented operating point", "[fear]") {
  FearConfig cfg;
  FearState s = fear_from_components(0.1, 0.1, 1.0, cfg);
  CHECK(s.potential == Approx(0.4));
  CHECK(s.intensity == Approx(0.3));
  CHECK(s.willingness == Approx(0.3));
  CHECK(s.threshold == 0.1);
}

TEST_CASE("appraisal runs the three fuzzy legs", "[fear]") {
  FisSet fis = FisSet::standard();
  FearConfig cfg;

  // All-zero inputs fire exactly the middle output token of each system, so
  // every leg equals the analytic centroid of that full triangle.
  double mid = (0.25 + fuzzy::kCalibratedPeaks[2] + 0.73) / 3.0;
  FearState zero = appraise(AppraisalInputs{}, fis, cfg);
  CHECK(zero.undesirability == Approx(mid).margin(1e-3));
  CHECK(zero.likelihood == Approx(mid).margin(1e-3));
  CHECK(zero.ig == Approx(mid).margin(1e-3));
  CHECK(zero.potential == Approx(mid).margin(1e-3));
  CHECK(zero.intensity == Approx(zero.potential - cfg.threshold));

  AppraisalInputs row12{0.96, 0.0, 0.0, 0.0, 0.0, 0.0};
  FearState s = appraise(row12, fis, cfg);
  CHECK(s.undesirability == Approx(0.917).margin(0.1));
}

TEST_CASE("appraisal is idempotent", "[fear]") {
  FisSet fis = FisSet::standard();
  FearConfig cfg;
  AppraisalInputs in{0.3, 0.7, 0.2, 0.9, 0.5, 0.4};
  FearState a = appraise(in, fis, cfg);
  FearState b = appraise(in, fis, cfg);
  CHECK(a.undesirability == b.undesirability);
  CHECK(a.likelihood == b.likelihood);
  CHECK(a.ig == b.ig);
  CHECK(a.potential == b.potential);
  CHECK(a.intensity == b.intensity);
  CHECK(a.willingness == b.willingness);
}

TEST_CASE("potential is monotone in each appraisal input", "[fear]") {
  Rng rng(1234);
  for (auto combiner : {FearCombiner::ArithmeticMean, FearCombiner::Min, FearCombiner::Product}) {
    FearConfig cfg;
    cfg.combiner = combiner;
    for (int i = 0; i < 2000; ++i) {
      double a = rng.uniform(), b = rng.uniform(), c = rng.uniform();
      double base = fear_potential(a, b, c, cfg);
      double bump = rng.uniform() * (1.0 - a);
      CHECK(fear_potential(a + bump, b, c, cfg) >= base);
      bump = rng.uniform() * (1.0 - b);
      CHECK(fear_potential(a, b + bump, c, cfg) >= base);
      bump = rng.uniform() * (1.0 - c);
      CHECK(fear_potential(a, b, c + bump, cfg) >= base);
    }
  }
}

TEST_CASE("every fear state field stays in the unit interval", "[fear]") {
  FisSet fis = FisSet::standard();
  FearConfig cfg;
  Rng rng(555);
  for (int i = 0; i < 300; ++i) {
    AppraisalInputs in{rng.uniform(), rng.uniform(), rng.uniform(),
                       rng.uniform(), rng.uniform(), rng.uniform()};
    FearState s = appraise(in, fis, cfg);
    for (double v : {s.undesirability, s.likelihood, s.ig, s.potential, s.threshold,
                     s.intensity, s.willingness}) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
    CHECK(s.intensity <= s.potential);
    CHECK(s.willingness == s.intensity);
  }
}

TEST_CASE("fear config validation", "[fear]") {
  FearConfig cfg;
  cfg.threshold = 1.2;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = FearConfig{};
  cfg.weights = {0.5, 0.5, 0.5};
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = FearConfig{};
  cfg.weights = {-0.5, 1.0, 0.5};
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = FearConfig{};
  CHECK_NOTHROW(cfg.validate());
}
