#include <doctest.h>

#include "fixtures.hpp"
#include "momcert/errors.hpp"
#include "momcert/io.hpp"

using namespace momcert;
using fixtures::q;

TEST_CASE("atom list parsing") {
  const auto mu = parse_atoms("(-1:3/4),(1/2:1/4)");
  REQUIRE(mu.size() == 2);
  CHECK(mu.atoms()[0].point[0] == -1);
  CHECK(mu.atoms()[1].weight == q(1, 4));
  const auto planar = parse_atoms("(0.5, -0.5 : 1)");
  CHECK(planar.num_vars() == 2);
  CHECK(planar.atoms()[0].point[1] == q(-1, 2));
  CHECK_THROWS_AS(parse_atoms("(0:1/2)"), Error);
  CHECK_THROWS_AS(parse_atoms("(0,1:1/2),(1:1/2)"), Error);
  CHECK_THROWS_AS(parse_atoms("(0;1)"), Error);
  CHECK(parse_point("1/2, -3") == Point{q(1, 2), q(-3)});
}

TEST_CASE("report json shapes") {
  const auto L = from_atomic(fixtures::two_atom(), 64);
  const auto box = to_json(support_box(L, 0.05));
  CHECK(box["intervals"].size() == 1);
  CHECK(box["intervals"][0].size() == 2);
  MassOptions opt;
  opt.budget = 3;
  const auto mass = to_json(atom_mass(L, {q(-1)}, 1, opt));
  for (const char* key : {"alpha", "d", "bounds", "value", "converged"}) CHECK(mass.contains(key));
  CHECK(mass["alpha"][0] == "-1/1");
  const auto fin = to_json(finite_support_check(L, 2, default_tests(1), {}));
  CHECK(fin["verdict"]["Finite"] == 2);
  for (const char* key : {"C_est", "cardinality_bound", "hankel_rank", "d"}) CHECK(fin.contains(key));
  const auto rec = to_json(prony_recover(L));
  CHECK(rec["method"] == "Prony1D");
  CHECK(rec["atoms"][0].contains("point"));
  CHECK(rec.contains("residual"));
  const auto growth = to_json(growth_profile(L, Polynomial::variable(1, 0)));
  CHECK(growth["verdict"] == "Bounded");
}

TEST_CASE("csv emission") {
  using Rows = std::vector<std::pair<unsigned, double>>;
  CHECK(to_csv(Rows{{1, 0.5}, {2, 0.25}}) == "index,value\n1,0.5\n2,0.25\n");
  CHECK(to_csv(Rows{{3, 1.0}}, "n,bound") == "n,bound\n3,1\n");
}
