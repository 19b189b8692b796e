#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "momcert/growth.hpp"
#include "momcert/linalg.hpp"
#include "momcert/moments.hpp"
#include "momcert/polynomial.hpp"

namespace momcert {

using Point = std::vector<Rational>;

struct SupportBox {
  std::vector<double> radius;                       // p_L estimate of each X_i
  std::vector<std::pair<double, double>> intervals;  // [-r_i - slack, r_i + slack]
  double slack = 0.0;

  bool contains(const Point& p) const;
};

/// Generator box of the support. Throws GrowthDiverging(i) if the profile of
/// some coordinate X_i diverges.
SupportBox support_box(const MomentSequence& L, double slack,
                       const GrowthThresholds& thresholds = {});

/// Coordinates, their squares, and pairwise products.
std::vector<Polynomial> default_tests(std::size_t num_vars);

struct KlResult {
  bool rejected = false;
  std::optional<Polynomial> witness;
  double witness_value = 0.0;  // |a(alpha)|
  double witness_bound = 0.0;  // p_L estimate of a
};

/// Finitely many tests can only reject: NotRejected is no proof of membership.
KlResult kl_member(const MomentSequence& L, const Point& alpha,
                   const std::vector<Polynomial>& tests, double slack,
                   const GrowthThresholds& thresholds = {});

/// (1 - eps (b(alpha) - b)^2 / pL_2b^2)^(2n), exact.
Polynomial bump(const Point& alpha, const Polynomial& b, const Rational& pL_2b,
                const Rational& epsilon, unsigned n,
                unsigned degree_budget = kDefaultDegreeBudget);

struct MassOptions {
  Rational epsilon = 1;
  unsigned budget = 16;       // largest bump index n per separating polynomial
  unsigned max_power = 8;     // one-sided separating powers s^m - 1/2, m <= max_power
  std::vector<Point> candidates;  // other candidate atoms, used to pick the linear form
  std::uint64_t seed = 0;
  double slack = 0.05;
  double min_scale = 0.0;  // lower limit on the bump scale; grid scans set it to a few node steps
};

struct MassEstimate {
  Point alpha;
  unsigned d = 0;
  std::vector<std::pair<unsigned, double>> upper_bounds;  // running minimum
  bool converged = false;
  double value = 1.0;
  bool outside_box = false;
  Polynomial separating_form;
};

/// Upper bounds on the mass of {alpha}: for bumps a in [alpha]_K with
/// a(alpha) = 1 = p_L(a), nu({alpha}) <= p_d(a)^(2^d) = L(a^(2^d)).
MassEstimate atom_mass(const MomentSequence& L, const Point& alpha, unsigned d,
                       const MassOptions& options = {});

struct FiniteSupportReport {
  unsigned d = 0;
  double C_est = 1.0;
  double cardinality_bound = 1.0;  // C_est^(-2^d)
  std::size_t hankel_rank = 0;     // rank at the largest level examined
  std::vector<std::size_t> ranks;
  std::optional<std::size_t> finite;  // Finite(N) when the ranks go flat
  bool consistent = true;             // N <= cardinality_bound (1 + 1e-6)
};

FiniteSupportReport finite_support_check(const MomentSequence& L, unsigned d,
                                         const std::vector<Polynomial>& sample_polys,
                                         const std::vector<Point>& bump_candidates,
                                         const MassOptions& options = {});

/// (n, min(1, L(a^2n) / threshold^2n)) for every feasible n.
std::vector<std::pair<unsigned, double>> chebyshev_tail(const MomentSequence& L,
                                                        const Polynomial& a, double threshold);

struct QlCertificate {
  double C_a = 0.0;
  PsdReport upper;  // C_a - a
  PsdReport lower;  // C_a + a
  bool both_psd() const {
    return upper.verdict == PsdVerdict::PSD && lower.verdict == PsdVerdict::PSD;
  }
};

/// Localizing-matrix certificates that C_a +- a lie in Q_L at level t, with
/// C_a = p_L estimate of a widened by slack.
QlCertificate ql_certificates(const MomentSequence& L, const Polynomial& a, unsigned t,
                              double slack = 0.05, const GrowthThresholds& thresholds = {});

}  // namespace momcert
