#pragma once

#include <vector>

#include "momcert/moments.hpp"
#include "momcert/polynomial.hpp"

namespace momcert {

/// One rung of a power sequence: value = power^(1/k) with the exact power
/// L(a^k) kept alongside.
struct PowerEntry {
  unsigned index = 0;  // d for the ladder, n for the root sequence
  double value = 0.0;
  Rational power;
};

enum class GrowthVerdict { Bounded, Diverging, Inconclusive };
const char* to_string(GrowthVerdict v);

struct GrowthThresholds {
  /// Bounded when the last relative ladder increments all fall below this.
  double bounded_increment = 1e-3;
  /// ... or when successive log-increments of the ladder shrink at least by
  /// this factor.
  double contraction = 0.75;
  /// Diverging when log r_n grows in log n at least at this slope.
  double divergence_slope = 0.25;
};

struct GrowthProfile {
  Polynomial poly;
  std::vector<PowerEntry> ladder;  // (d, p_d), d = 1..d_max
  std::vector<PowerEntry> roots;   // (n, r_n)
  unsigned d_max = 0;
  double p_L_estimate = 0.0;  // last ladder value; a lower bound on p_L
  double slope = 0.0;         // log-log slope of r_n over the upper half
  GrowthVerdict verdict = GrowthVerdict::Inconclusive;
};

/// Exact L(a^(2^d)); throws NegativePower if it is negative.
Rational p_d_power(const MomentSequence& L, const Polynomial& a, unsigned d);

/// p_d(a) = L(a^(2^d))^(1/2^d). Requires 2^d deg(a) <= D.
double p_d(const MomentSequence& L, const Polynomial& a, unsigned d);

/// Largest d with 2^d deg(a) <= D (constants are treated as degree one).
unsigned ladder_depth(const MomentSequence& L, const Polynomial& a);

/// r_n = L(a^(2n))^(1/2n) for every n with 2n deg(a) <= D.
std::vector<PowerEntry> root_sequence(const MomentSequence& L, const Polynomial& a);

/// Deepest ladder value p_{d_max}(a): the truncation's lower bound on p_L(a).
double p_L_estimate(const MomentSequence& L, const Polynomial& a);

GrowthProfile growth_profile(const MomentSequence& L, const Polynomial& a,
                             const GrowthThresholds& thresholds = {});

/// Sum of 1/r_n over feasible n; +inf as soon as some r_n vanishes.
double carleman_partial(const MomentSequence& L, const Polynomial& a);

/// Exact check that r_n is nondecreasing: L(a^2n)^(n+1) <= L(a^(2n+2))^n.
bool roots_monotone(const MomentSequence& L, const Polynomial& a);

struct SeminormSample {
  Polynomial a;
  Polynomial b;
  Rational lambda;
};

struct SeminormCheck {
  bool triangle = false;
  bool homogeneity = false;
  bool cross_submultiplicative = false;
  double p_sum = 0.0;        // p_d(a + b)
  double p_a = 0.0;          // p_d(a)
  double p_b = 0.0;          // p_d(b)
  double p_product = 0.0;    // p_d(ab)
  double p_next_a = 0.0;     // p_{d+1}(a)
  double p_next_b = 0.0;     // p_{d+1}(b)
  bool all() const { return triangle && homogeneity && cross_submultiplicative; }
};

struct SeminormReport {
  unsigned d = 0;
  std::vector<SeminormCheck> checks;
  bool all_pass() const;
};

inline constexpr double kSeminormRelativeTolerance = 1e-9;

SeminormReport seminorm_props(const MomentSequence& L, unsigned d,
                              const std::vector<SeminormSample>& samples);

/// (p_1(a) = 0) <=> (p_d(a) = 0), with exact zero tests.
bool kernel_check(const MomentSequence& L, const Polynomial& a, unsigned d);

}  // namespace momcert
