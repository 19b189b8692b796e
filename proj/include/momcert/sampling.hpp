#pragma once

#include <cstdint>
#include <random>

#include "momcert/polynomial.hpp"

namespace momcert {

/// Random polynomial of total degree <= max_degree with small rational
/// coefficients (numerators in [-4, 4], denominators in [1, 4]). Uses raw
/// engine output only, no distributions.
Polynomial random_polynomial(std::size_t num_vars, unsigned max_degree, std::mt19937_64& rng);

}  // namespace momcert
