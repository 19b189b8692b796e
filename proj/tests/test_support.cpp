#include <doctest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "momcert/errors.hpp"
#include "momcert/growth.hpp"
#include "momcert/support.hpp"

using namespace momcert;
using fixtures::q;

namespace {

Polynomial X() { return Polynomial::variable(1, 0); }
Polynomial K(const Rational& c) { return Polynomial::constant(1, c); }

MomentSequence uniform(unsigned D) { return from_closed_form({Family::UniformUnitInterval, 0}, D); }

bool nonincreasing(const MassEstimate& est) {
  for (std::size_t k = 1; k < est.upper_bounds.size(); ++k) {
    if (est.upper_bounds[k].second > est.upper_bounds[k - 1].second) return false;
  }
  return true;
}

// Brute-force L(a^k) for an atomic measure.
long double power_of(const AtomicMeasure& mu, const Polynomial& a, unsigned k) {
  long double s = 0;
  for (const auto& atom : mu.atoms()) {
    s += static_cast<long double>(to_double(atom.weight)) *
         std::pow(static_cast<long double>(to_double(a.eval(atom.point))), k);
  }
  return s;
}

}  // namespace

TEST_CASE("support box examples") {
  const AtomicMeasure point({{{q(1, 2), q(-1, 3)}, q(1)}});
  const auto box = support_box(from_atomic(point, 16), 0.05);
  REQUIRE(box.intervals.size() == 2);
  CHECK(box.intervals[0].second == doctest::Approx(0.55));
  CHECK(box.intervals[0].first == doctest::Approx(-0.55));
  CHECK(box.intervals[1].second == doctest::Approx(1.0 / 3 + 0.05));
  const auto two = support_box(from_atomic(fixtures::two_atom(), 64), 0.05);
  CHECK(two.intervals[0].second == doctest::Approx(1.05).epsilon(0.01));
  CHECK(two.contains({q(-1)}));
  CHECK_FALSE(two.contains({q(6, 5)}));
  try {
    support_box(from_closed_form({Family::StandardGaussian, 0}, 64), 0.05);
    FAIL("expected GrowthDiverging");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::GrowthDiverging);
  }
}

TEST_CASE("kl membership examples") {
  const auto two = from_atomic(fixtures::two_atom(), 64);
  const auto vanish = (X() + K(1)) * (X() - K(q(1, 2)));
  const std::vector<Polynomial> tests{X(), X() * X(), vanish};
  CHECK_FALSE(kl_member(two, {q(-1)}, tests, 0.05).rejected);
  CHECK_FALSE(kl_member(two, {q(1, 2)}, tests, 0.05).rejected);
  const auto r = kl_member(two, {q(0)}, tests, 0.05);
  CHECK(r.rejected);
  REQUIRE(r.witness.has_value());
  CHECK(*r.witness == vanish);
  CHECK(r.witness_value == doctest::Approx(0.5));
  const auto d0 = from_atomic(fixtures::dirac(0), 16);
  const auto r0 = kl_member(d0, {q(1)}, {X()}, 0.05);
  CHECK(r0.rejected);
  CHECK(*r0.witness == X());
}

TEST_CASE("kl membership never rejects a true atom") {
  std::mt19937_64 rng(0);
  for (unsigned trial = 0; trial < 20; ++trial) {
    const auto mu = fixtures::random_fixture(rng);
    const auto L = from_atomic(mu, 128);
    for (const auto& atom : mu.atoms()) {
      CHECK_FALSE(kl_member(L, atom.point, default_tests(1), 0.05).rejected);
    }
  }
  const AtomicMeasure planar({{{q(1, 2), q(-1, 2)}, q(1, 2)}, {{q(-1, 4), q(3, 4)}, q(1, 2)}});
  const auto L2 = from_atomic(planar, 32);
  for (const auto& atom : planar.atoms()) {
    CHECK_FALSE(kl_member(L2, atom.point, default_tests(2), 0.05).rejected);
  }
}

TEST_CASE("bump examples") {
  const auto b1 = bump({q(0)}, X(), q(2), q(1), 1);
  CHECK(b1 == pow(K(1) - X() * X() * q(1, 4), 2));
  const auto b2 = bump({q(1, 2)}, X(), q(2), q(1, 2), 2);
  const auto inner = K(q(1, 2)) - X();
  CHECK(b2 == pow(K(1) - inner * inner * q(1, 8), 4));
  std::mt19937_64 rng(2);
  for (int k = 0; k < 10; ++k) {
    const Point alpha{q(static_cast<long>(rng() % 9) - 4, 3)};
    CHECK(bump(alpha, X(), q(3), q(1, 1 + rng() % 4), 1 + rng() % 5).eval(alpha) == 1);
  }
  CHECK_THROWS_AS(bump({q(0)}, X(), q(2), q(3, 2), 1), Error);
  CHECK_THROWS_AS(bump({q(0)}, X(), q(0), q(1), 1), Error);
  CHECK_THROWS_AS(bump({q(0)}, X(), q(2), q(1), 200), Error);
}

TEST_CASE("singleton mass examples") {
  const auto c = from_atomic(fixtures::dirac(q(2, 3)), 64);
  const auto at_c = atom_mass(c, {q(2, 3)}, 1, {.budget = 4});
  CHECK(at_c.value == doctest::Approx(1.0).epsilon(1e-6));
  for (const auto& [n, v] : at_c.upper_bounds) CHECK(v == doctest::Approx(1.0).epsilon(1e-6));

  const auto two = from_atomic(fixtures::two_atom(), 128);
  MassOptions opt;
  opt.candidates = {{q(-1)}, {q(1, 2)}};
  const auto big = atom_mass(two, {q(-1)}, 2, opt);
  CHECK(big.value == doctest::Approx(0.75).epsilon(0.05 / 0.75));
  CHECK(nonincreasing(big));
  const auto small = atom_mass(two, {q(1, 2)}, 2, opt);
  CHECK(std::fabs(small.value - 0.25) <= 0.05);
  CHECK(atom_mass(two, {q(0)}, 2, opt).value <= 0.05);

  const auto u = atom_mass(uniform(128), {q(1)}, 2);
  CHECK(u.value <= 0.05);
  CHECK(nonincreasing(u));
  CHECK_THROWS_AS(atom_mass(two, {q(0)}, 6), Error);
}

TEST_CASE("singleton mass bounds never undershoot the truth") {
  std::mt19937_64 rng(0);
  for (unsigned trial = 0; trial < 8; ++trial) {
    const auto mu = fixtures::random_fixture(rng, 3);
    const auto L = from_atomic(mu, 128);
    MassOptions opt;
    for (const auto& a : mu.atoms()) opt.candidates.push_back(a.point);
    double total = 0;
    for (const auto& a : mu.atoms()) {
      const auto est = atom_mass(L, a.point, 2, opt);
      CHECK(nonincreasing(est));
      for (const auto& [n, v] : est.upper_bounds) CHECK(v >= to_double(a.weight) - 1e-9);
      total += est.value;
    }
    CHECK(total >= 0.9);
    CHECK(total <= 1.1);
  }
}

TEST_CASE("outside-box candidates are tagged") {
  const auto two = from_atomic(fixtures::two_atom(), 64);
  const auto est = atom_mass(two, {q(3)}, 1);
  CHECK(est.outside_box);
  CHECK(est.value <= 0.05);
  CHECK_FALSE(atom_mass(two, {q(-1)}, 1).outside_box);
}

TEST_CASE("bivariate singleton mass") {
  const AtomicMeasure planar({{{q(1, 2), q(-1, 2)}, q(2, 3)}, {{q(-1, 2), q(1, 4)}, q(1, 3)}});
  const auto L = from_atomic(planar, 32);
  MassOptions opt;
  opt.candidates = {planar.atoms()[0].point, planar.atoms()[1].point};
  const auto est = atom_mass(L, planar.atoms()[0].point, 1, opt);
  CHECK(est.value >= 2.0 / 3 - 1e-9);
  CHECK(est.value <= 2.0 / 3 + 0.05);
  CHECK(est.separating_form.degree() == 1);
}

TEST_CASE("finite support examples") {
  const auto c = from_atomic(fixtures::dirac(q(1, 3)), 64);
  const auto rc = finite_support_check(c, 2, default_tests(1), {{q(1, 3)}});
  REQUIRE(rc.finite.has_value());
  CHECK(*rc.finite == 1);
  CHECK(rc.C_est == doctest::Approx(1.0));
  CHECK(rc.cardinality_bound == doctest::Approx(1.0));

  const auto two = from_atomic(fixtures::two_atom(), 128);
  const auto r2 = finite_support_check(two, 2, default_tests(1), {{q(-1)}, {q(1, 2)}});
  REQUIRE(r2.finite.has_value());
  CHECK(*r2.finite == 2);
  CHECK(std::fabs(std::pow(r2.C_est, 4) - 0.25) <= 0.05);
  CHECK(r2.cardinality_bound >= 2);
  CHECK(r2.consistent);

  const auto ru = finite_support_check(uniform(64), 2, default_tests(1), {});
  CHECK_FALSE(ru.finite.has_value());
  CHECK_THROWS_AS(finite_support_check(two, 7, default_tests(1), {}), Error);
}

TEST_CASE("finite support matches atom counts") {
  std::mt19937_64 rng(0);
  for (unsigned trial = 0; trial < 20; ++trial) {
    const auto mu = fixtures::random_fixture(rng);
    const auto r = finite_support_check(from_atomic(mu, 64), 2, default_tests(1), {});
    REQUIRE(r.finite.has_value());
    CHECK(*r.finite == mu.size());
  }
}

TEST_CASE("chebyshev tails") {
  const auto d1 = chebyshev_tail(from_atomic(fixtures::dirac(1), 64), X(), 1.2);
  for (const auto& [n, v] : d1) CHECK(v == doctest::Approx(std::pow(1 / 1.2, 2.0 * n)));
  CHECK(d1.back().second < 1e-4);

  const auto mu = fixtures::two_atom();
  const auto two = from_atomic(mu, 64);
  double lowest = 1;
  for (const auto& [n, v] : chebyshev_tail(two, X(), 0.9)) {
    CHECK(v == doctest::Approx(std::min(1.0L, power_of(mu, X(), 2 * n) / std::pow(0.9L, 2 * n))));
    lowest = std::min(lowest, v);
  }
  CHECK(lowest >= 0.75);
  CHECK(chebyshev_tail(two, X(), 1.1).back().second < 0.01);

  const auto g = chebyshev_tail(from_closed_form({Family::StandardGaussian, 0}, 64), X(), 10);
  long double best = 1, df = 1;
  for (unsigned n = 1; n <= 32; ++n) {
    df *= 2 * n - 1;
    best = std::min(best, df / std::pow(10.0L, 2 * n));
  }
  double got = 1;
  for (const auto& [n, v] : g) got = std::min(got, v);
  CHECK(got == doctest::Approx(static_cast<double>(best)));
  CHECK(got > 0);
  CHECK_THROWS_AS(chebyshev_tail(two, X(), 0), Error);
}

TEST_CASE("archimedean generator certificates") {
  const auto c = from_atomic(fixtures::dirac(q(-2, 5)), 16);
  CHECK(ql_certificates(c, X(), 3).both_psd());
  const auto two = from_atomic(fixtures::two_atom(), 64);
  CHECK(ql_certificates(two, X(), 2).both_psd());
  const auto unit = ql_certificates(two, K(1), 2, 0.0);
  CHECK(unit.C_a == doctest::Approx(1.0));
  CHECK(unit.both_psd());
  CHECK(unit.upper.rank_estimate == 0);
  CHECK_THROWS_AS(ql_certificates(two, X(), 40), Error);
}
