#include "momcert/growth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "momcert/errors.hpp"

namespace momcert {

const char* to_string(GrowthVerdict v) {
  switch (v) {
    case GrowthVerdict::Bounded: return "Bounded";
    case GrowthVerdict::Diverging: return "Diverging";
    case GrowthVerdict::Inconclusive: return "Inconclusive";
  }
  return "?";
}

namespace {

unsigned effective_degree(const Polynomial& a) { return std::max(1u, a.degree()); }

void require_feasible(unsigned long degree, unsigned available) {
  if (degree > available) {
    throw Error(ErrorKind::DegreeExceeded, "DegreeExceeded(" + std::to_string(degree) + ", " +
                                               std::to_string(available) + ")");
  }
}

Rational checked_even_moment(const MomentSequence& L, const ScaledPoly& power) {
  Rational v = L.apply(power);
  if (sgn(v) < 0) {
    throw Error(ErrorKind::NegativePower,
                "positivity violation: L(a^k) = " + to_string(v) + " < 0 for an even power");
  }
  return v;
}

}  // namespace

Rational p_d_power(const MomentSequence& L, const Polynomial& a, unsigned d) {
  if (d >= 31) throw Error(ErrorKind::DegreeExceeded, "ladder index too large");
  require_feasible((1UL << d) * a.degree(), L.max_degree());
  const unsigned budget = std::max(L.max_degree(), kDefaultDegreeBudget);
  return checked_even_moment(L, scaled_pow2(a, d, budget));
}

double p_d(const MomentSequence& L, const Polynomial& a, unsigned d) {
  return nth_root(p_d_power(L, a, d), 1UL << d);
}

unsigned ladder_depth(const MomentSequence& L, const Polynomial& a) {
  const unsigned deg = effective_degree(a);
  unsigned d = 0;
  while ((2UL << d) * deg <= L.max_degree()) ++d;
  return d;
}

std::vector<PowerEntry> root_sequence(const MomentSequence& L, const Polynomial& a) {
  const unsigned deg = effective_degree(a);
  std::vector<PowerEntry> out;
  const ScaledPoly sq = scale_out(a * a);
  ScaledPoly power = scale_out(Polynomial::constant(a.num_vars(), 1));
  for (unsigned n = 1; 2UL * n * deg <= L.max_degree(); ++n) {
    power = multiply(power, sq);
    Rational v = checked_even_moment(L, power);
    out.push_back({n, nth_root(v, 2UL * n), std::move(v)});
  }
  return out;
}

double p_L_estimate(const MomentSequence& L, const Polynomial& a) {
  const unsigned depth = ladder_depth(L, a);
  if (depth == 0) require_feasible(2UL * a.degree(), L.max_degree());
  return p_d(L, a, depth);
}

namespace {

double upper_half_slope(const std::vector<PowerEntry>& roots) {
  if (roots.size() < 2) return 0.0;
  const std::size_t n_max = roots.back().index;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int count = 0;
  for (const auto& r : roots) {
    if (2 * r.index < n_max) continue;
    if (r.value <= 0.0) return 0.0;
    const double x = std::log(static_cast<double>(r.index));
    const double y = std::log(r.value);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++count;
  }
  if (count < 2) return 0.0;
  const double denom = count * sxx - sx * sx;
  return denom > 0 ? (count * sxy - sx * sy) / denom : 0.0;
}

bool ladder_settled(const std::vector<PowerEntry>& ladder, const GrowthThresholds& th) {
  if (ladder.empty()) return false;
  if (std::all_of(ladder.begin(), ladder.end(), [](const PowerEntry& e) { return e.value == 0.0; })) {
    return true;
  }
  if (ladder.size() < 2) return false;
  const std::size_t first = ladder.size() >= 4 ? ladder.size() - 4 : 0;
  std::vector<double> relative;
  std::vector<double> log_step;
  for (std::size_t k = first; k + 1 < ladder.size(); ++k) {
    const double lo = ladder[k].value;
    const double hi = ladder[k + 1].value;
    if (lo <= 0.0) return false;
    relative.push_back(std::max(0.0, (hi - lo) / lo));
    log_step.push_back(std::max(0.0, std::log(hi / lo)));
  }
  if (std::all_of(relative.begin(), relative.end(),
                  [&](double r) { return r < th.bounded_increment; })) {
    return true;
  }
  if (log_step.size() < 3) return false;
  for (std::size_t k = 0; k + 1 < log_step.size(); ++k) {
    if (log_step[k + 1] > th.contraction * log_step[k]) return false;
  }
  return true;
}

}  // namespace

GrowthProfile growth_profile(const MomentSequence& L, const Polynomial& a,
                             const GrowthThresholds& thresholds) {
  GrowthProfile profile{a, {}, {}, 0, 0.0, 0.0, GrowthVerdict::Inconclusive};
  profile.d_max = ladder_depth(L, a);
  if (profile.d_max == 0) require_feasible(2UL * a.degree(), L.max_degree());
  profile.roots = root_sequence(L, a);
  for (unsigned d = 1; d <= profile.d_max; ++d) {
    const auto& r = profile.roots.at((1UL << (d - 1)) - 1);
    profile.ladder.push_back({d, r.value, r.power});
  }
  profile.p_L_estimate = profile.ladder.back().value;
  profile.slope = upper_half_slope(profile.roots);
  if (profile.slope >= thresholds.divergence_slope) {
    profile.verdict = GrowthVerdict::Diverging;
  } else if (ladder_settled(profile.ladder, thresholds)) {
    profile.verdict = GrowthVerdict::Bounded;
  }
  return profile;
}

double carleman_partial(const MomentSequence& L, const Polynomial& a) {
  double sum = 0.0;
  for (const auto& r : root_sequence(L, a)) {
    if (sgn(r.power) == 0) return std::numeric_limits<double>::infinity();
    sum += 1.0 / r.value;
  }
  return sum;
}

bool roots_monotone(const MomentSequence& L, const Polynomial& a) {
  const auto roots = root_sequence(L, a);
  for (std::size_t k = 0; k + 1 < roots.size(); ++k) {
    const unsigned long n = roots[k].index;
    if (pow(roots[k].power, n + 1) > pow(roots[k + 1].power, n)) return false;
  }
  return true;
}

bool SeminormReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const SeminormCheck& c) { return c.all(); });
}

namespace {

bool leq_relative(double lhs, double rhs) {
  return lhs <= rhs + kSeminormRelativeTolerance * std::max(std::fabs(lhs), std::fabs(rhs));
}

}  // namespace

SeminormReport seminorm_props(const MomentSequence& L, unsigned d,
                              const std::vector<SeminormSample>& samples) {
  if (d == 0) throw Error(ErrorKind::Validation, "seminorm checks need d >= 1");
  SeminormReport report{d, {}};
  for (const auto& s : samples) {
    SeminormCheck c;
    const Polynomial sum = s.a + s.b;
    const Polynomial product = s.a * s.b;
    const Rational pa = p_d_power(L, s.a, d);
    const Rational pb = p_d_power(L, s.b, d);
    c.p_a = nth_root(pa, 1UL << d);
    c.p_b = nth_root(pb, 1UL << d);
    c.p_sum = p_d(L, sum, d);
    if (d == 1) {
      // p_1(a+b) <= p_1(a) + p_1(b)  <=>  L(ab) <= sqrt(L(a^2) L(b^2)).
      const Rational lab = L.apply(scaled_product(s.a, s.b));
      c.triangle = sgn(lab) <= 0 || lab * lab <= pa * pb;
    } else {
      c.triangle = leq_relative(c.p_sum, c.p_a + c.p_b);
    }
    // Homogeneity on the exact 2^d-th powers.
    const Rational scaled = p_d_power(L, s.a * s.lambda, d);
    c.homogeneity = scaled == pow(s.lambda, 1UL << d) * pa;
    // p_d(ab) <= p_{d+1}(a) p_{d+1}(b), raised to the 2^(d+1)-th power.
    const Rational pab = p_d_power(L, product, d);
    const Rational pa_next = p_d_power(L, s.a, d + 1);
    const Rational pb_next = p_d_power(L, s.b, d + 1);
    c.p_product = nth_root(pab, 1UL << d);
    c.p_next_a = nth_root(pa_next, 2UL << d);
    c.p_next_b = nth_root(pb_next, 2UL << d);
    c.cross_submultiplicative = pab * pab <= pa_next * pb_next;
    report.checks.push_back(std::move(c));
  }
  return report;
}

bool kernel_check(const MomentSequence& L, const Polynomial& a, unsigned d) {
  const bool first = sgn(p_d_power(L, a, 1)) == 0;
  const bool deep = sgn(p_d_power(L, a, d)) == 0;
  return first == deep;
}

}  // namespace momcert
