#include "momcert/support.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>

#include "momcert/errors.hpp"

namespace momcert {

bool SupportBox::contains(const Point& p) const {
  if (p.size() != intervals.size()) return false;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double x = to_double(p[i]);
    if (x < intervals[i].first || x > intervals[i].second) return false;
  }
  return true;
}

namespace {

GrowthProfile bounded_profile(const MomentSequence& L, const Polynomial& a,
                              const GrowthThresholds& thresholds, std::size_t index) {
  GrowthProfile profile = growth_profile(L, a, thresholds);
  if (profile.verdict == GrowthVerdict::Diverging) {
    throw Error(ErrorKind::GrowthDiverging, "GrowthDiverging(" + std::to_string(index) + ")");
  }
  return profile;
}

}  // namespace

SupportBox support_box(const MomentSequence& L, double slack, const GrowthThresholds& thresholds) {
  if (slack < 0) throw Error(ErrorKind::Validation, "slack must be nonnegative");
  SupportBox box;
  box.slack = slack;
  for (std::size_t i = 0; i < L.num_vars(); ++i) {
    const auto profile = bounded_profile(L, Polynomial::variable(L.num_vars(), i), thresholds, i);
    box.radius.push_back(profile.p_L_estimate);
    box.intervals.emplace_back(-profile.p_L_estimate - slack, profile.p_L_estimate + slack);
  }
  return box;
}

std::vector<Polynomial> default_tests(std::size_t num_vars) {
  std::vector<Polynomial> tests;
  for (std::size_t i = 0; i < num_vars; ++i) tests.push_back(Polynomial::variable(num_vars, i));
  for (std::size_t i = 0; i < num_vars; ++i) {
    for (std::size_t j = i; j < num_vars; ++j) {
      tests.push_back(Polynomial::variable(num_vars, i) * Polynomial::variable(num_vars, j));
    }
  }
  return tests;
}

KlResult kl_member(const MomentSequence& L, const Point& alpha,
                   const std::vector<Polynomial>& tests, double slack,
                   const GrowthThresholds& thresholds) {
  if (alpha.size() != L.num_vars()) {
    throw Error(ErrorKind::DimensionMismatch, "candidate point has wrong dimension");
  }
  KlResult result;
  for (std::size_t k = 0; k < tests.size(); ++k) {
    const auto profile = bounded_profile(L, tests[k], thresholds, k);
    const Rational at_alpha = abs(tests[k].eval(alpha));
    const double value = to_double(at_alpha);
    const double bound = profile.p_L_estimate * (1.0 + slack);
    const bool reject = profile.p_L_estimate == 0.0 ? sgn(at_alpha) != 0 : value > bound;
    if (reject) {
      result.rejected = true;
      result.witness = tests[k];
      result.witness_value = value;
      result.witness_bound = profile.p_L_estimate;
      return result;
    }
  }
  return result;
}

Polynomial bump(const Point& alpha, const Polynomial& b, const Rational& pL_2b,
                const Rational& epsilon, unsigned n, unsigned degree_budget) {
  if (sgn(epsilon) <= 0 || epsilon > 1) {
    throw Error(ErrorKind::Validation, "bump epsilon must lie in (0, 1]");
  }
  if (sgn(pL_2b) <= 0) throw Error(ErrorKind::Validation, "bump scale p_L(2b) must be positive");
  const std::size_t m = b.num_vars();
  if (4UL * n * b.degree() > degree_budget) {
    throw Error(ErrorKind::BudgetExceeded, "bump of degree " + std::to_string(4UL * n * b.degree()) +
                                               " exceeds budget " + std::to_string(degree_budget));
  }
  const Polynomial shift = Polynomial::constant(m, b.eval(alpha)) - b;
  const Polynomial base =
      Polynomial::constant(m, 1) - (shift * shift) * (epsilon / (pL_2b * pL_2b));
  return pow(base, 2UL * n, degree_budget);
}

namespace {

Polynomial embed(const Polynomial& univariate, std::size_t num_vars, std::size_t var) {
  Polynomial::Terms terms;
  for (const auto& [exp, c] : univariate.terms()) {
    std::vector<std::uint32_t> e(num_vars, 0);
    e[var] = exp[0];
    terms.emplace(Exponent(std::move(e)), c);
  }
  return Polynomial(num_vars, std::move(terms));
}

Polynomial choose_linear_form(std::size_t num_vars, const Point& alpha,
                              const std::vector<Point>& candidates, std::uint64_t seed) {
  Polynomial x1 = Polynomial::variable(num_vars, 0);
  if (num_vars == 1 || candidates.empty()) return x1;
  std::mt19937_64 rng(seed);
  for (int attempt = 0; attempt < 16; ++attempt) {
    Polynomial form(num_vars);
    for (std::size_t i = 0; i < num_vars; ++i) {
      const long c = static_cast<long>(rng() % 17) - 8;
      form += Polynomial::variable(num_vars, i) * Rational(c);
    }
    if (form.is_zero()) continue;
    const Rational at_alpha = form.eval(alpha);
    std::set<Rational> values{at_alpha};
    bool separates = true;
    for (const auto& c : candidates) {
      if (c == alpha) continue;
      if (!values.insert(form.eval(c)).second) {
        separates = false;
        break;
      }
    }
    if (separates) return form;
  }
  return x1;
}

class BoundSweep {
 public:
  explicit BoundSweep(MassEstimate& est) : est_(est) {}

  void add(const Rational& bound) {
    raw_.push_back(std::clamp(to_double(bound), 0.0, 1.0));
    best_ = std::min(best_, raw_.back());
    est_.upper_bounds.emplace_back(static_cast<unsigned>(raw_.size()), best_);
  }

  void finish() {
    est_.value = best_;
    const auto& ub = est_.upper_bounds;
    if (ub.size() < 3) {
      est_.converged = false;
      return;
    }
    const double before_tail = ub[ub.size() - 1 - ub.size() / 3].second;
    est_.converged = before_tail - best_ < 1e-3;
  }

 private:
  MassEstimate& est_;
  std::vector<double> raw_;
  double best_ = 1.0;
};

// Bump scale for b: p_L(b) + |b(alpha)|, an upper bound for |b(alpha) - b| on
// the support.
std::optional<Rational> bump_scale(const MomentSequence& push, const Polynomial& b,
                                   const Rational& t_alpha, double floor) {
  const double pb = p_L_estimate(push, b);
  const double at = std::fabs(to_double(b.eval(std::vector<Rational>{t_alpha})));
  const double scale = std::max(pb + at, floor);
  if (!(scale > 1e-12)) return std::nullopt;
  Rational q = dyadic(scale, 40);
  if (sgn(q) <= 0) return std::nullopt;
  return q;
}

void sweep_line(const MomentSequence& push, const Rational& t_alpha, unsigned d,
                const MassOptions& opt, BoundSweep& sweep) {
  const unsigned D = push.max_degree();
  const unsigned long lift = 1UL << d;
  const Polynomial T = Polynomial::variable(1, 0);
  const Rational mean = push.value(Exponent({1}));
  const Polynomial centered = T - Polynomial::constant(1, mean);

  std::vector<Polynomial> family{centered};
  const Rational radius = dyadic(p_L_estimate(push, centered), 40);
  const Rational far = t_alpha >= mean ? Rational(mean - radius) : Rational(mean + radius);
  const Rational span = t_alpha - far;
  if (sgn(span) != 0) {
    const Polynomial s = (T - Polynomial::constant(1, far)) * Rational(1 / span);
    for (unsigned m = 2; m <= opt.max_power; ++m) {
      family.push_back(pow(s, m, D) - Polynomial::constant(1, Rational(1, 2)));
    }
  }

  const Point at{t_alpha};
  for (const auto& b : family) {
    if (4UL * b.degree() * lift > D) continue;
    const auto scale = bump_scale(push, b, t_alpha, opt.min_scale);
    if (!scale) continue;
    for (unsigned n = 1; n <= opt.budget && 4UL * n * b.degree() * lift <= D; ++n) {
      const Polynomial a = bump(at, b, *scale, opt.epsilon, n, D);
      const Rational peak = pow(a.eval(at), lift);
      sweep.add(push.apply(scaled_pow2(a, d, D)) / peak);
    }
  }
}

// Products of per-coordinate bumps.
void sweep_product(const MomentSequence& L, const Point& alpha, unsigned d,
                   const MassOptions& opt, BoundSweep& sweep) {
  const std::size_t m = L.num_vars();
  const unsigned D = L.max_degree();
  const unsigned long lift = 1UL << d;
  const Polynomial T = Polynomial::variable(1, 0);
  struct Factor {
    std::size_t var;
    Polynomial b;
    Rational scale;
  };
  std::vector<Factor> factors;
  for (std::size_t i = 0; i < m; ++i) {
    const MomentSequence marginal = pushforward(L, Polynomial::variable(m, i));
    const Polynomial b = T - Polynomial::constant(1, marginal.value(Exponent({1})));
    if (auto scale = bump_scale(marginal, b, alpha[i], opt.min_scale)) factors.push_back({i, b, *scale});
  }
  if (factors.size() < 2) return;
  for (unsigned n = 1; n <= opt.budget && 4UL * n * lift * factors.size() <= D; ++n) {
    Polynomial lifted = Polynomial::constant(m, 1);
    Rational peak = 1;
    for (const auto& f : factors) {
      const Point at{alpha[f.var]};
      const Polynomial a = bump(at, f.b, f.scale, opt.epsilon, n, D);
      peak *= pow(a.eval(at), lift);
      lifted = lifted * embed(pow2(a, d, D), m, f.var);
    }
    sweep.add(L.apply(lifted) / peak);
  }
}

}  // namespace

MassEstimate atom_mass(const MomentSequence& L, const Point& alpha, unsigned d,
                       const MassOptions& options) {
  if (alpha.size() != L.num_vars()) {
    throw Error(ErrorKind::DimensionMismatch, "candidate point has wrong dimension");
  }
  if (d == 0) throw Error(ErrorKind::Validation, "atom_mass needs d >= 1");
  if ((4UL << d) > L.max_degree()) {
    throw Error(ErrorKind::BudgetExceeded,
                "no bump fits: need degree " + std::to_string(4UL << d) + " > " +
                    std::to_string(L.max_degree()));
  }
  const std::size_t m = L.num_vars();
  MassEstimate est;
  est.alpha = alpha;
  est.d = d;
  for (std::size_t i = 0; i < m; ++i) {
    const double r = p_L_estimate(L, Polynomial::variable(m, i));
    if (std::fabs(to_double(alpha[i])) > r + options.slack) est.outside_box = true;
  }

  est.separating_form = choose_linear_form(m, alpha, options.candidates, options.seed);
  BoundSweep sweep(est);
  const bool identity = m == 1 && est.separating_form == Polynomial::variable(1, 0);
  const MomentSequence push = identity ? L : pushforward(L, est.separating_form);
  sweep_line(push, est.separating_form.eval(alpha), d, options, sweep);
  if (m > 1) sweep_product(L, alpha, d, options, sweep);
  sweep.finish();
  return est;
}

FiniteSupportReport finite_support_check(const MomentSequence& L, unsigned d,
                                         const std::vector<Polynomial>& sample_polys,
                                         const std::vector<Point>& bump_candidates,
                                         const MassOptions& options) {
  FiniteSupportReport report;
  report.d = d;
  const unsigned long lift = 1UL << d;
  double c_est = 1.0;
  for (const auto& a : sample_polys) {
    if (lift * a.degree() > L.max_degree()) {
      throw Error(ErrorKind::DegreeExceeded, "sample polynomial infeasible at level d");
    }
    const double pl = p_L_estimate(L, a);
    if (pl < 1e-12) continue;
    c_est = std::min(c_est, p_d(L, a, d) / pl);
  }
  for (const auto& c : bump_candidates) {
    MassOptions opt = options;
    opt.candidates = bump_candidates;
    const MassEstimate est = atom_mass(L, c, d, opt);
    c_est = std::min(c_est, std::pow(est.value, 1.0 / static_cast<double>(lift)));
  }
  report.C_est = c_est;
  report.cardinality_bound = c_est > 0 ? std::pow(c_est, -static_cast<double>(lift))
                                       : std::numeric_limits<double>::infinity();
  const RankLadder ladder = moment_rank_ladder(L);
  report.ranks = ladder.ranks;
  report.hankel_rank = ladder.ranks.back();
  if (ladder.psd && ladder.flat_level) report.finite = ladder.ranks[*ladder.flat_level];
  if (report.finite) {
    report.consistent =
        static_cast<double>(*report.finite) <= report.cardinality_bound * (1.0 + 1e-6);
  }
  return report;
}

std::vector<std::pair<unsigned, double>> chebyshev_tail(const MomentSequence& L,
                                                        const Polynomial& a, double threshold) {
  if (!(threshold > 0)) throw Error(ErrorKind::Validation, "threshold must be positive");
  const Rational thr = dyadic(threshold, 40);
  std::vector<std::pair<unsigned, double>> out;
  for (const auto& r : root_sequence(L, a)) {
    const Rational ratio = r.power / pow(thr, 2UL * r.index);
    out.emplace_back(r.index, std::clamp(to_double(ratio), 0.0, 1.0));
  }
  if (out.empty()) throw Error(ErrorKind::DegreeExceeded, "no feasible power for the tail bound");
  return out;
}

QlCertificate ql_certificates(const MomentSequence& L, const Polynomial& a, unsigned t,
                              double slack, const GrowthThresholds& thresholds) {
  if (2UL * t + a.degree() > L.max_degree()) {
    throw Error(ErrorKind::DegreeExceeded, "localizing matrix infeasible at level t");
  }
  const auto profile = bounded_profile(L, a, thresholds, 0);
  QlCertificate cert;
  cert.C_a = profile.p_L_estimate + slack;
  const Polynomial c = Polynomial::constant(a.num_vars(), dyadic(cert.C_a, 40));
  cert.upper = psd_check(localizing_matrix(L, c - a, t));
  cert.lower = psd_check(localizing_matrix(L, c + a, t));
  return cert;
}

}  // namespace momcert
