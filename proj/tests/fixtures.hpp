// Shared fixtures and brute-force oracles for the test suite. The oracles
// work on atoms in long double and never touch the exact pipeline.
#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "momcert/moments.hpp"
#include "momcert/rational.hpp"

namespace fixtures {

using momcert::Atom;
using momcert::AtomicMeasure;
using momcert::Rational;

inline AtomicMeasure measure(std::vector<std::pair<Rational, Rational>> atoms) {
  std::vector<Atom> out;
  for (auto& [x, w] : atoms) out.push_back({{x}, w});
  return AtomicMeasure(std::move(out));
}

inline Rational q(long p, long d = 1) {
  Rational r(p, d);
  r.canonicalize();
  return r;
}

// {(-1, 3/4), (1/2, 1/4)}
inline AtomicMeasure two_atom() { return measure({{q(-1), q(3, 4)}, {q(1, 2), q(1, 4)}}); }

inline AtomicMeasure dirac(const Rational& c) { return measure({{c, q(1)}}); }

// Random 1-D fixture: 1..max_atoms atoms on the grid k/20 in [-2, 2] with
// pairwise separation >= 1/10, weights multiples of 1/100 and >= 1/20.
inline AtomicMeasure random_fixture(std::mt19937_64& rng, unsigned max_atoms = 5) {
  const unsigned n = 1 + static_cast<unsigned>(rng() % max_atoms);
  std::vector<long> grid;
  while (grid.size() < n) {
    const long k = static_cast<long>(rng() % 81) - 40;
    if (std::all_of(grid.begin(), grid.end(), [&](long g) { return std::labs(g - k) >= 2; })) {
      grid.push_back(k);
    }
  }
  std::vector<long> w(n, 5);
  for (long left = 100 - 5 * static_cast<long>(n); left > 0; --left) ++w[rng() % n];
  std::vector<std::pair<Rational, Rational>> atoms;
  for (unsigned i = 0; i < n; ++i) atoms.push_back({q(grid[i], 20), q(w[i], 100)});
  return measure(std::move(atoms));
}

// sum_j w_j x_j^k
inline long double power_sum(const AtomicMeasure& mu, unsigned k) {
  long double s = 0;
  for (const auto& a : mu.atoms()) {
    s += static_cast<long double>(momcert::to_double(a.weight)) *
         std::pow(static_cast<long double>(momcert::to_double(a.point[0])), k);
  }
  return s;
}

inline double max_abs_atom(const AtomicMeasure& mu, std::size_t coord = 0) {
  double m = 0;
  for (const auto& a : mu.atoms()) m = std::max(m, std::fabs(momcert::to_double(a.point[coord])));
  return m;
}

inline double min_weight(const AtomicMeasure& mu) { return momcert::to_double(mu.min_weight()); }

}  // namespace fixtures
