// fuzzy.hpp : two-input Mamdani inference engine with five-level linguistic
// variables, the three concrete rule bases (likelihood, undesirability, Ig),
// intensity classification and membership-peak calibration.
//
// All variables share the same five support ranges on [0,1]; the peak inside
// each support is a calibrated parameter. Inference is min/max Mamdani with
// centroid defuzzification over a fixed sample grid, so identical inputs give
// bit-identical outputs.
#pragma once

#include <algorithm>
#include <array>
#include <cassert>
#include <cmath>
#include <cstdio>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace avsoc::fuzzy {

inline constexpr int kTokensPerVariable = 5;
inline constexpr int kRulesPerSystem = 25;
inline constexpr int kDefuzzSamples = 1001;
inline constexpr double kValidationTolerance = 0.1;

// ---------------------------------------------------------------------------
// Membership functions
// ---------------------------------------------------------------------------

/// Triangular membership function on [0,1]. Shoulder variants are flat
/// between the peak and the nearest domain edge so the edge has degree 1.
struct MembershipFunction {
  double a = 0.0;  // left foot
  double b = 0.0;  // peak
  double c = 0.0;  // right foot
  bool left_shoulder = false;
  bool right_shoulder = false;
};

inline double membership(const MembershipFunction& mf, double x) {
  if (x < 0.0 || x > 1.0) throw std::domain_error("membership: input outside [0,1]");
  if (mf.left_shoulder && x <= mf.b) return 1.0;
  if (mf.right_shoulder && x >= mf.b) return 1.0;
  if (x <= mf.a || x >= mf.c) return 0.0;
  if (x < mf.b) return (x - mf.a) / (mf.b - mf.a);
  if (x > mf.b) return (mf.c - x) / (mf.c - mf.b);
  return 1.0;
}

struct Token {
  std::string name;
  MembershipFunction mf;
};

struct LinguisticVariable {
  std::string name;
  std::array<Token, kTokensPerVariable> tokens;

  int index_of(std::string_view token) const {
    for (int i = 0; i < kTokensPerVariable; ++i)
      if (tokens[i].name == token) return i;
    return -1;
  }
};

// ---------------------------------------------------------------------------
// Supports and peaks
// ---------------------------------------------------------------------------

struct SupportRange {
  double lo, hi;
};

/// Five half-open intensity ranges shared by every five-level variable.
/// Adjacent ranges deliberately overlap.
struct IntensityScale {
  std::array<SupportRange, kTokensPerVariable> ranges;
};

inline constexpr IntensityScale kIntensityScale{{{{0.0, 0.24},
                                                  {0.1, 0.5},
                                                  {0.25, 0.73},
                                                  {0.51, 0.9},
                                                  {0.76, 1.0}}}};

/// Peak position per token, indexed VL..VH.
using PeakSet = std::array<double, kTokensPerVariable>;

/// Result of calibrate_membership_peaks against the undesirability
/// validation set, frozen as the default layout for every variable.
inline constexpr PeakSet kCalibratedPeaks{0.19, 0.235, 0.65, 0.77, 0.995};

inline double layout_membership(const IntensityScale& scale, const PeakSet& peaks,
                                int token, double x) {
  MembershipFunction mf{scale.ranges[token].lo, peaks[token], scale.ranges[token].hi,
                        token == 0, token == kTokensPerVariable - 1};
  return membership(mf, x);
}

inline LinguisticVariable make_variable(std::string name,
                                        const std::array<std::string_view, kTokensPerVariable>& token_names,
                                        const IntensityScale& scale = kIntensityScale,
                                        const PeakSet& peaks = kCalibratedPeaks) {
  LinguisticVariable var;
  var.name = std::move(name);
  for (int i = 0; i < kTokensPerVariable; ++i) {
    const auto& r = scale.ranges[i];
    if (!(r.lo <= peaks[i] && peaks[i] <= r.hi))
      throw std::invalid_argument("make_variable: peak outside its support");
    var.tokens[i] = Token{std::string(token_names[i]),
                          MembershipFunction{r.lo, peaks[i], r.hi, i == 0,
                                             i == kTokensPerVariable - 1}};
  }
  return var;
}

/// Token with maximal membership at `value`; exact ties break toward the
/// lower (more conservative) token.
inline int classify_intensity(const LinguisticVariable& var, double value) {
  int best = 0;
  double best_degree = membership(var.tokens[0].mf, value);
  for (int i = 1; i < kTokensPerVariable; ++i) {
    double d = membership(var.tokens[i].mf, value);
    if (d > best_degree) {
      best = i;
      best_degree = d;
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// Inference system
// ---------------------------------------------------------------------------

/// One rule: (input1 token AND input2 token) -> output token, all by index.
struct FuzzyRule {
  int in1, in2, out;
};

/// Output token by [input1 token][input2 token].
using RuleTable = std::array<std::array<int, kTokensPerVariable>, kTokensPerVariable>;

class FuzzyInferenceSystem {
 public:
  FuzzyInferenceSystem(LinguisticVariable in1, LinguisticVariable in2,
                       LinguisticVariable out, std::vector<FuzzyRule> rules)
      : input1_(std::move(in1)), input2_(std::move(in2)), output_(std::move(out)),
        rules_(std::move(rules)) {
    validate_rules();
  }

  const LinguisticVariable& input1() const { return input1_; }
  const LinguisticVariable& input2() const { return input2_; }
  const LinguisticVariable& output() const { return output_; }
  const std::vector<FuzzyRule>& rules() const { return rules_; }

  /// Output token index for an exact antecedent pair.
  int rule_output(int in1_token, int in2_token) const {
    for (const auto& r : rules_)
      if (r.in1 == in1_token && r.in2 == in2_token) return r.out;
    return -1;
  }

  int rule_output(std::string_view in1_token, std::string_view in2_token) const {
    return rule_output(input1_.index_of(in1_token), input2_.index_of(in2_token));
  }

  /// Mamdani inference: min activation, max aggregation per output token,
  /// clipped output sets, centroid of the union.
  double infer(double x1, double x2) const {
    if (x1 < 0.0 || x1 > 1.0 || x2 < 0.0 || x2 > 1.0)
      throw std::domain_error("infer: input outside [0,1]");
    std::array<double, kTokensPerVariable> activation{};
    for (const auto& r : rules_) {
      double a = std::min(membership(input1_.tokens[r.in1].mf, x1),
                          membership(input2_.tokens[r.in2].mf, x2));
      activation[r.out] = std::max(activation[r.out], a);
    }
    double num = 0.0, den = 0.0;
    for (int i = 0; i < kDefuzzSamples; ++i) {
      double y = static_cast<double>(i) / (kDefuzzSamples - 1);
      double m = 0.0;
      for (int t = 0; t < kTokensPerVariable; ++t) {
        if (activation[t] <= 0.0) continue;
        m = std::max(m, std::min(activation[t], membership(output_.tokens[t].mf, y)));
      }
      num += y * m;
      den += m;
    }
    // The joint support coverage of the five tokens guarantees a firing rule.
    assert(den > 0.0);
    return num / den;
  }

 private:
  void validate_rules() const {
    if (rules_.size() != kRulesPerSystem)
      throw std::invalid_argument("FuzzyInferenceSystem: expected 25 rules");
    std::array<std::array<bool, kTokensPerVariable>, kTokensPerVariable> seen{};
    for (const auto& r : rules_) {
      if (r.in1 < 0 || r.in1 >= kTokensPerVariable || r.in2 < 0 ||
          r.in2 >= kTokensPerVariable || r.out < 0 || r.out >= kTokensPerVariable)
        throw std::invalid_argument("FuzzyInferenceSystem: rule token out of range");
      if (seen[r.in1][r.in2])
        throw std::invalid_argument("FuzzyInferenceSystem: duplicate antecedent");
      seen[r.in1][r.in2] = true;
    }
  }

  LinguisticVariable input1_, input2_, output_;
  std::vector<FuzzyRule> rules_;
};

// ---------------------------------------------------------------------------
// The three concrete rule bases
// ---------------------------------------------------------------------------

inline constexpr std::array<std::string_view, 5> kDistanceTokens{"VLD", "LD", "MD", "HD", "VHD"};
inline constexpr std::array<std::string_view, 5> kSpeedTokens{"VLS", "LS", "MS", "HS", "VHS"};
inline constexpr std::array<std::string_view, 5> kLikelihoodTokens{"VLLH", "LLH", "MLH", "HLH", "VHLH"};
inline constexpr std::array<std::string_view, 5> kImpGoalTokens{"VLImpG", "LImpG", "MImpG", "HImpG", "VHImpG"};
inline constexpr std::array<std::string_view, 5> kAchGoalTokens{"NAG", "LAG", "MAG", "HAG", "VHFAG"};
inline constexpr std::array<std::string_view, 5> kUndesirabilityTokens{"VLUD", "LUD", "MUD", "HUD", "VHUD"};
inline constexpr std::array<std::string_view, 5> kSenseOfRealityTokens{"VLSOR", "LSOR", "MSOR", "HSOR", "VHSOR"};
inline constexpr std::array<std::string_view, 5> kProximityTokens{"AboutTo", "GoingTo", "MChance", "LChance", "NChance"};
inline constexpr std::array<std::string_view, 5> kIgTokens{"VLIG", "LIG", "MIG", "HIG", "VHIG"};

// Rule rows are kept in table order so that serialization can be diffed
// against the golden tables line by line. Token indices are
// VL..VH slots (for Proximity: AboutTo..NChance).
inline constexpr std::array<FuzzyRule, kRulesPerSystem> kLikelihoodRules{{
    {4, 4, 2}, {4, 3, 1}, {4, 2, 0}, {4, 1, 0}, {4, 0, 0},  // VHD block
    {3, 4, 3}, {3, 3, 2}, {3, 2, 0}, {3, 1, 0}, {3, 0, 0},  // HD
    {2, 4, 4}, {2, 3, 4}, {2, 2, 2}, {2, 1, 1}, {2, 0, 0},  // MD
    {1, 4, 4}, {1, 3, 4}, {1, 2, 3}, {1, 1, 2}, {1, 0, 0},  // LD
    {0, 4, 4}, {0, 3, 4}, {0, 2, 4}, {0, 1, 3}, {0, 0, 2},  // VLD
}};

inline constexpr std::array<FuzzyRule, kRulesPerSystem> kUndesirabilityRules{{
    {0, 0, 2}, {0, 1, 1}, {0, 2, 1}, {0, 3, 0}, {0, 4, 0},  // VLImpG block
    {1, 0, 2}, {1, 1, 2}, {1, 2, 1}, {1, 3, 0}, {1, 4, 0},  // LImpG
    {2, 0, 3}, {2, 1, 2}, {2, 2, 2}, {2, 3, 1}, {2, 4, 0},  // MImpG
    {3, 0, 4}, {3, 1, 3}, {3, 2, 3}, {3, 3, 2}, {3, 4, 0},  // HImpG
    {4, 0, 4}, {4, 1, 3}, {4, 2, 3}, {4, 3, 3}, {4, 4, 0},  // VHImpG
}};

inline constexpr std::array<FuzzyRule, kRulesPerSystem> kIgRules{{
    {0, 0, 2}, {0, 1, 2}, {0, 2, 1}, {0, 3, 0}, {0, 4, 0},  // VLSOR block
    {1, 0, 3}, {1, 1, 2}, {1, 2, 2}, {1, 3, 1}, {1, 4, 0},  // LSOR
    {2, 0, 3}, {2, 1, 3}, {2, 2, 2}, {2, 3, 1}, {2, 4, 0},  // MSOR
    {3, 0, 4}, {3, 1, 3}, {3, 2, 2}, {3, 3, 1}, {3, 4, 0},  // HSOR
    {4, 0, 4}, {4, 1, 4}, {4, 2, 3}, {4, 3, 3}, {4, 4, 2},  // VHSOR
}};

inline RuleTable rule_table(std::span<const FuzzyRule> rules) {
  RuleTable t{};
  for (const auto& r : rules) t[r.in1][r.in2] = r.out;
  return t;
}

inline FuzzyInferenceSystem build_likelihood_fis(const PeakSet& peaks = kCalibratedPeaks) {
  return FuzzyInferenceSystem(
      make_variable("Distance", kDistanceTokens, kIntensityScale, peaks),
      make_variable("Speed", kSpeedTokens, kIntensityScale, peaks),
      make_variable("Likelihood", kLikelihoodTokens, kIntensityScale, peaks),
      {kLikelihoodRules.begin(), kLikelihoodRules.end()});
}

inline FuzzyInferenceSystem build_undesirability_fis(const PeakSet& peaks = kCalibratedPeaks) {
  return FuzzyInferenceSystem(
      make_variable("ImpGoal", kImpGoalTokens, kIntensityScale, peaks),
      make_variable("AchGoal", kAchGoalTokens, kIntensityScale, peaks),
      make_variable("Undesirability", kUndesirabilityTokens, kIntensityScale, peaks),
      {kUndesirabilityRules.begin(), kUndesirabilityRules.end()});
}

inline FuzzyInferenceSystem build_ig_fis(const PeakSet& peaks = kCalibratedPeaks) {
  return FuzzyInferenceSystem(
      make_variable("SenseOfReality", kSenseOfRealityTokens, kIntensityScale, peaks),
      make_variable("Proximity", kProximityTokens, kIntensityScale, peaks),
      make_variable("Ig", kIgTokens, kIntensityScale, peaks),
      {kIgRules.begin(), kIgRules.end()});
}

// ---------------------------------------------------------------------------
// Plain-text export/import
// ---------------------------------------------------------------------------

/// One rule per line: IN1_TOKEN,IN2_TOKEN,OUT_TOKEN (table order preserved).
inline std::string serialize_rules(const FuzzyInferenceSystem& fis) {
  std::string out;
  for (const auto& r : fis.rules()) {
    out += fis.input1().tokens[r.in1].name;
    out += ',';
    out += fis.input2().tokens[r.in2].name;
    out += ',';
    out += fis.output().tokens[r.out].name;
    out += '\n';
  }
  return out;
}

struct RuleLine {
  std::string in1, in2, out;
};

struct PeakLine {
  std::string variable, token;
  double a, b, c;
};

namespace detail {
inline std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (!std::isspace(static_cast<unsigned char>(ch))) {
      cur += ch;
    }
  }
  fields.push_back(cur);
  return fields;
}
}  // namespace detail

inline std::vector<RuleLine> parse_rule_lines(const std::string& text) {
  std::vector<RuleLine> rules;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto f = detail::split_csv(line);
    if (f.size() != 3) throw std::invalid_argument("rule line needs 3 fields: " + line);
    rules.push_back({f[0], f[1], f[2]});
  }
  return rules;
}

/// Builds an inference system from parsed rule lines, resolving token names
/// against the given variables.
inline FuzzyInferenceSystem make_fis(LinguisticVariable in1, LinguisticVariable in2,
                                     LinguisticVariable out,
                                     const std::vector<RuleLine>& lines) {
  std::vector<FuzzyRule> rules;
  rules.reserve(lines.size());
  for (const auto& l : lines) {
    int i1 = in1.index_of(l.in1), i2 = in2.index_of(l.in2), io = out.index_of(l.out);
    if (i1 < 0 || i2 < 0 || io < 0)
      throw std::invalid_argument("unknown token in rule: " + l.in1 + "," + l.in2 + "," + l.out);
    rules.push_back({i1, i2, io});
  }
  return FuzzyInferenceSystem(std::move(in1), std::move(in2), std::move(out), std::move(rules));
}

/// One peak per line: VARIABLE,TOKEN,a,b,c.
inline std::string serialize_peaks(const LinguisticVariable& var) {
  std::string out;
  char buf[128];
  for (const auto& t : var.tokens) {
    std::snprintf(buf, sizeof buf, "%s,%s,%g,%g,%g\n", var.name.c_str(),
                  t.name.c_str(), t.mf.a, t.mf.b, t.mf.c);
    out += buf;
  }
  return out;
}

inline std::string serialize_peaks(const FuzzyInferenceSystem& fis) {
  return serialize_peaks(fis.input1()) + serialize_peaks(fis.input2()) +
         serialize_peaks(fis.output());
}

inline std::vector<PeakLine> parse_peak_lines(const std::string& text) {
  std::vector<PeakLine> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto f = detail::split_csv(line);
    if (f.size() != 5) throw std::invalid_argument("peak line needs 5 fields: " + line);
    out.push_back({f[0], f[1], std::stod(f[2]), std::stod(f[3]), std::stod(f[4])});
  }
  return out;
}

/// Rebuilds one variable from parsed peak lines (token order preserved; the
/// first and last tokens become shoulders).
inline LinguisticVariable variable_from_peak_lines(const std::string& name,
                                                   std::span<const PeakLine> lines) {
  std::vector<const PeakLine*> own;
  for (const auto& l : lines)
    if (l.variable == name) own.push_back(&l);
  if (own.size() != kTokensPerVariable)
    throw std::invalid_argument("variable_from_peak_lines: expected 5 tokens for " + name);
  LinguisticVariable var;
  var.name = name;
  for (int i = 0; i < kTokensPerVariable; ++i) {
    var.tokens[i] = Token{own[i]->token,
                          MembershipFunction{own[i]->a, own[i]->b, own[i]->c, i == 0,
                                             i == kTokensPerVariable - 1}};
  }
  return var;
}

// ---------------------------------------------------------------------------
// Validation fixture (undesirability system)
// ---------------------------------------------------------------------------

/// One validation row: crisp inputs with their expected token classes and the
/// expected crisp output with its token class.
struct UndesirabilityTestRow {
  double imp_goal;
  int imp_token;
  double ach_goal;
  int ach_token;
  double expected;
  int expected_token;
};

inline constexpr std::array<UndesirabilityTestRow, 14> kUndesirabilityValidation{{
    {0.10, 0, 0.5, 2, 0.25, 1},
    {0.20, 0, 1.0, 4, 0.08, 0},
    {0.27, 1, 0.0, 0, 0.52, 2},
    {0.30, 1, 0.5, 2, 0.31, 1},
    {0.40, 1, 1.0, 4, 0.09, 0},
    {0.50, 2, 0.0, 0, 0.74, 3},
    {0.56, 2, 0.5, 2, 0.567, 2},
    {0.60, 2, 1.0, 4, 0.09, 0},
    {0.80, 3, 0.0, 0, 0.91, 4},
    {0.85, 3, 0.5, 2, 0.746, 3},
    {0.79, 3, 1.0, 4, 0.085, 0},
    {0.96, 4, 0.0, 0, 0.917, 4},
    {0.98, 4, 0.5, 2, 0.747, 3},
    {1.00, 4, 1.0, 4, 0.08, 0},
}};

struct ValidationOutcome {
  double actual;
  int actual_token;
  bool token_ok;
  bool value_ok;
  bool ok() const { return token_ok && value_ok; }
};

inline std::vector<ValidationOutcome> run_undesirability_validation(
    const FuzzyInferenceSystem& fis, double tolerance = kValidationTolerance) {
  std::vector<ValidationOutcome> out;
  out.reserve(kUndesirabilityValidation.size());
  for (const auto& row : kUndesirabilityValidation) {
    double actual = fis.infer(row.imp_goal, row.ach_goal);
    int token = classify_intensity(fis.output(), actual);
    out.push_back({actual, token, token == row.expected_token,
                   std::abs(actual - row.expected) <= tolerance});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Peak calibration
// ---------------------------------------------------------------------------

struct PeakConstraint {
  double value;
  int token;
};

struct CalibrationResult {
  PeakSet peaks;
  double max_error;  // worst |actual-expected| over the validation rows
};

class calibration_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Classification constraints implied by the validation fixture: every
/// labeled input and output value must classify to its labeled token.
inline std::vector<PeakConstraint> validation_constraints(
    std::span<const UndesirabilityTestRow> rows = kUndesirabilityValidation) {
  std::vector<PeakConstraint> out;
  for (const auto& r : rows) {
    out.push_back({r.imp_goal, r.imp_token});
    out.push_back({r.ach_goal, r.ach_token});
    out.push_back({r.expected, r.expected_token});
  }
  return out;
}

namespace detail {

inline bool classify_ok(const IntensityScale& scale, const PeakSet& peaks,
                        std::span<const PeakConstraint> constraints) {
  for (const auto& c : constraints) {
    int best = 0;
    double best_degree = layout_membership(scale, peaks, 0, c.value);
    for (int t = 1; t < kTokensPerVariable; ++t) {
      double d = layout_membership(scale, peaks, t, c.value);
      if (d > best_degree) {
        best = t;
        best_degree = d;
      }
    }
    if (best != c.token) return false;
  }
  return true;
}

/// Max |actual-expected| under the shared layout, or nullopt when a token
/// label misses or a row exceeds `tolerance`. Aborts early beyond `cutoff`.
inline std::optional<double> rows_error(const IntensityScale& scale, const PeakSet& peaks,
                                        const RuleTable& rules,
                                        std::span<const UndesirabilityTestRow> rows,
                                        double tolerance, double cutoff) {
  // Output-side membership samples, shared across rows.
  std::array<std::array<double, kDefuzzSamples>, kTokensPerVariable> table;
  for (int t = 0; t < kTokensPerVariable; ++t)
    for (int i = 0; i < kDefuzzSamples; ++i)
      table[t][i] = layout_membership(scale, peaks, t,
                                      static_cast<double>(i) / (kDefuzzSamples - 1));
  double worst = 0.0;
  for (const auto& row : rows) {
    std::array<double, kTokensPerVariable> m1{}, m2{}, act{};
    for (int t = 0; t < kTokensPerVariable; ++t) {
      m1[t] = layout_membership(scale, peaks, t, row.imp_goal);
      m2[t] = layout_membership(scale, peaks, t, row.ach_goal);
    }
    for (int i = 0; i < kTokensPerVariable; ++i)
      for (int j = 0; j < kTokensPerVariable; ++j) {
        double a = std::min(m1[i], m2[j]);
        int o = rules[i][j];
        act[o] = std::max(act[o], a);
      }
    double num = 0.0, den = 0.0;
    for (int i = 0; i < kDefuzzSamples; ++i) {
      double m = 0.0;
      for (int t = 0; t < kTokensPerVariable; ++t)
        if (act[t] > 0.0) m = std::max(m, std::min(act[t], table[t][i]));
      num += static_cast<double>(i) / (kDefuzzSamples - 1) * m;
      den += m;
    }
    assert(den > 0.0);
    double actual = num / den;
    int best = 0;
    double best_degree = layout_membership(scale, peaks, 0, actual);
    for (int t = 1; t < kTokensPerVariable; ++t) {
      double d = layout_membership(scale, peaks, t, actual);
      if (d > best_degree) {
        best = t;
        best_degree = d;
      }
    }
    if (best != row.expected_token) return std::nullopt;
    double err = std::abs(actual - row.expected);
    if (err > tolerance || err >= cutoff) return std::nullopt;
    worst = std::max(worst, err);
  }
  return worst;
}

inline std::vector<double> peak_grid(const IntensityScale& scale, int token, double lo,
                                     double hi, double step) {
  // Shoulder peaks may sit on the domain edge; interior peaks keep one step
  // of margin from their feet so triangles stay non-degenerate.
  const auto& r = scale.ranges[token];
  double min_b = (token == 0) ? r.lo : r.lo + step;
  double max_b = (token == kTokensPerVariable - 1) ? r.hi : r.hi - step;
  lo = std::max(lo, min_b);
  hi = std::min(hi, max_b);
  std::vector<double> out;
  for (int k = 0;; ++k) {
    double v = lo + k * step;
    if (v > hi + 1e-12) break;
    out.push_back(std::min(v, hi));
  }
  return out;
}

inline std::optional<CalibrationResult> grid_pass(
    const IntensityScale& scale, std::span<const PeakConstraint> constraints,
    std::span<const UndesirabilityTestRow> rows, const RuleTable* rules,
    double tolerance, const std::array<std::vector<double>, kTokensPerVariable>& grid,
    std::optional<CalibrationResult> best) {
  PeakSet p{};
  for (double b0 : grid[0]) {
    p[0] = b0;
    for (double b1 : grid[1]) {
      p[1] = b1;
      for (double b2 : grid[2]) {
        p[2] = b2;
        for (double b3 : grid[3]) {
          p[3] = b3;
          for (double b4 : grid[4]) {
            p[4] = b4;
            if (!classify_ok(scale, p, constraints)) continue;
            if (rows.empty()) {
              if (!best) best = CalibrationResult{p, 0.0};
              continue;
            }
            double cutoff = best ? best->max_error : tolerance + 1.0;
            auto err = rows_error(scale, p, *rules, rows, tolerance, cutoff);
            if (err && (!best || *err < best->max_error)) best = CalibrationResult{p, *err};
          }
        }
      }
    }
  }
  return best;
}

}  // namespace detail

/// Grid-searches peak positions inside the fixed supports so that every
/// constraint value classifies to its expected token and, when validation
/// rows are supplied, every crisp output matches its expected value within
/// `tolerance`. A coarse pass (step 0.02) is refined locally (step 0.005);
/// ties keep the first candidate in scan order, so the result is
/// deterministic. Throws calibration_error when no layout satisfies the
/// constraints.
inline CalibrationResult calibrate_membership_peaks(
    const IntensityScale& scale, std::span<const PeakConstraint> constraints,
    std::span<const UndesirabilityTestRow> rows = {}, const RuleTable* rules = nullptr,
    double tolerance = kValidationTolerance) {
  if (!rows.empty() && rules == nullptr)
    throw std::invalid_argument("calibrate_membership_peaks: rows require a rule table");

  constexpr double kCoarse = 0.02, kFine = 0.005;
  std::array<std::vector<double>, kTokensPerVariable> grid;
  for (int t = 0; t < kTokensPerVariable; ++t)
    grid[t] = detail::peak_grid(scale, t, scale.ranges[t].lo, scale.ranges[t].hi, kCoarse);

  auto best = detail::grid_pass(scale, constraints, rows, rules, tolerance, grid, {});
  if (best) {
    for (int t = 0; t < kTokensPerVariable; ++t)
      grid[t] = detail::peak_grid(scale, t, best->peaks[t] - kCoarse,
                                  best->peaks[t] + kCoarse, kFine);
    best = detail::grid_pass(scale, constraints, rows, rules, tolerance, grid, best);
  }
  if (!best) {
    std::string msg = "calibration infeasible; constraints:";
    char buf[64];
    for (const auto& c : constraints) {
      std::snprintf(buf, sizeof buf, " (%g->%d)", c.value, c.token);
      msg += buf;
    }
    throw calibration_error(msg);
  }
  return *best;
}

}  // namespace avsoc::fuzzy
