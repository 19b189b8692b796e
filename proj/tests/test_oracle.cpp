#include <doctest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "momcert/errors.hpp"
#include "momcert/oracle.hpp"

using namespace momcert;
using fixtures::q;

namespace {

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::Validation;
}

// weighted 1-D mass closest to x
double truth_near(const AtomicMeasure& mu, double x) {
  double best = 1e9, w = 0;
  for (const auto& a : mu.atoms()) {
    const double dist = std::fabs(to_double(a.point[0]) - x);
    if (dist < best) best = dist, w = to_double(a.weight);
  }
  return w;
}

}  // namespace

TEST_CASE("prony examples") {
  const auto one = prony_recover(from_atomic(fixtures::dirac(q(1, 2)), 8));
  REQUIRE(one.atoms.size() == 1);
  CHECK(one.atoms[0].point[0] == doctest::Approx(0.5));
  CHECK(one.atoms[0].weight == doctest::Approx(1.0));
  CHECK(one.residual < 1e-12);
  CHECK(one.method == RecoveryMethod::Prony1D);

  const auto two = prony_recover(from_atomic(fixtures::two_atom(), 16));
  CHECK(compare(fixtures::two_atom(), two, 1e-6, 1e-6));
  CHECK(two.residual < 1e-10);

  CHECK(kind_of([] { prony_recover(from_closed_form({Family::UniformUnitInterval, 0}, 32)); }) ==
        ErrorKind::RankUnstable);
  CHECK(kind_of([] { prony_recover(from_closed_form({Family::StandardGaussian, 0}, 32)); }) ==
        ErrorKind::RankUnstable);
  const AtomicMeasure planar({{{q(0), q(1)}, q(1)}});
  CHECK(kind_of([&] { prony_recover(from_atomic(planar, 8)); }) == ErrorKind::DimensionMismatch);
}

TEST_CASE("prony round trip on random fixtures") {
  std::mt19937_64 rng(0);
  for (unsigned trial = 0; trial < 30; ++trial) {
    const auto mu = fixtures::random_fixture(rng);
    const auto r = prony_recover(from_atomic(mu, 2 * static_cast<unsigned>(mu.size()) + 2));
    CHECK(compare(mu, r, 1e-6, 1e-6));
    CHECK(r.residual < 1e-9);
  }
}

TEST_CASE("compare") {
  const auto mu = fixtures::two_atom();
  RecoveryResult same{{{{-1.0}, 0.75}, {{0.5}, 0.25}}, 0.0, RecoveryMethod::Prony1D};
  CHECK(compare(mu, same, 1e-12, 1e-12));
  RecoveryResult fewer{{{{-1.0}, 1.0}}, 0.0, RecoveryMethod::Prony1D};
  CHECK_FALSE(compare(mu, fewer, 1, 1));
  RecoveryResult off{{{{-1.0}, 0.75}, {{0.6}, 0.25}}, 0.0, RecoveryMethod::Prony1D};
  CHECK_FALSE(compare(mu, off, 1e-3, 1e-3));
  CHECK(compare(mu, off, 0.2, 1e-3));
}

TEST_CASE("grid scan examples") {
  const AtomicMeasure point({{{q(1, 2), q(-1, 2)}, q(1)}});
  const auto Lp = from_atomic(point, 32);
  const auto rp = grid_scan(Lp, support_box(Lp, 0.05), 21, 2, 0.5);
  REQUIRE(rp.atoms.size() == 1);
  CHECK(rp.atoms[0].point[0] == doctest::Approx(0.5).epsilon(0.05));
  CHECK(rp.atoms[0].point[1] == doctest::Approx(-0.5).epsilon(0.05));
  CHECK(rp.atoms[0].weight >= 0.9);
  CHECK(rp.method == RecoveryMethod::GridScan);

  const auto mu = fixtures::two_atom();
  const auto L = from_atomic(mu, 128);
  const auto r = grid_scan(L, support_box(L, 0.05), 41, 2, 0.1);
  REQUIRE(r.atoms.size() == 2);
  for (const auto& a : r.atoms) CHECK(std::fabs(a.weight - truth_near(mu, a.point[0])) <= 0.1);

  CHECK(kind_of([] {
          const auto g = from_closed_form({Family::StandardGaussian, 0}, 64);
          SupportBox box{{1.0}, {{-1.0, 1.0}}, 0.0};
          grid_scan(g, box, 11, 2, 0.1);
        }) == ErrorKind::GrowthDiverging);
  CHECK(kind_of([&] { grid_scan(L, support_box(L, 0.05), 1, 2, 0.1); }) == ErrorKind::Validation);
}

TEST_CASE("grid scan agrees with prony on separated atoms") {
  const std::vector<AtomicMeasure> cases{
      fixtures::measure({{q(-3, 2), q(1, 5)}, {q(0), q(1, 2)}, {q(3, 2), q(3, 10)}}),
      fixtures::measure({{q(-1, 3), q(2, 5)}, {q(4, 5), q(3, 5)}}),
      fixtures::measure({{q(7, 4), q(1)}}),
  };
  for (const auto& mu : cases) {
    const auto L = from_atomic(mu, 128);
    const auto prony = prony_recover(L);
    const auto grid = grid_scan(L, support_box(L, 0.05), 81, 2, 0.04);
    REQUIRE(grid.atoms.size() == prony.atoms.size());
    for (const auto& g : grid.atoms) CHECK(std::fabs(g.weight - truth_near(mu, g.point[0])) <= 0.05);
  }
}
