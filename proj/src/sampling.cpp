#include "momcert/sampling.hpp"

namespace momcert {

Polynomial random_polynomial(std::size_t num_vars, unsigned max_degree, std::mt19937_64& rng) {
  Polynomial p(num_vars);
  for (const auto& exp : monomials_up_to(num_vars, max_degree)) {
    const long num = static_cast<long>(rng() % 9) - 4;
    const unsigned long den = 1 + rng() % 4;
    if (num == 0) continue;
    Rational c(num, den);
    c.canonicalize();
    p += Polynomial::monomial(exp, c);
  }
  return p;
}

}  // namespace momcert
