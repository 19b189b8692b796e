#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "momcert/rational.hpp"

namespace momcert {

inline constexpr unsigned kDefaultDegreeBudget = 256;

/// Multi-index of a monomial X1^e1 ... Xm^em.
class Exponent {
 public:
  Exponent() = default;
  explicit Exponent(std::vector<std::uint32_t> entries);

  static Exponent zero(std::size_t num_vars);
  static Exponent unit(std::size_t num_vars, std::size_t var);

  std::size_t size() const { return entries_.size(); }
  std::uint32_t total() const { return total_; }
  std::uint32_t operator[](std::size_t i) const { return entries_[i]; }
  const std::vector<std::uint32_t>& entries() const { return entries_; }

  Exponent operator+(const Exponent& other) const;

  friend bool operator==(const Exponent&, const Exponent&) = default;

 private:
  std::vector<std::uint32_t> entries_;
  std::uint32_t total_ = 0;
};

/// Graded lexicographic order: lower total degree first, then the larger
/// power of X1 first, then X2, and so on (1, X1, X2, X1^2, X1X2, X2^2, ...).
struct GradedLex {
  bool operator()(const Exponent& a, const Exponent& b) const;
};

/// All exponents in num_vars variables with total degree <= max_total, in
/// graded lexicographic order.
std::vector<Exponent> monomials_up_to(std::size_t num_vars, unsigned max_total);

/// Exact polynomial in num_vars variables with rational coefficients. Zero
/// coefficients are never stored.
class Polynomial {
 public:
  using Terms = std::map<Exponent, Rational, GradedLex>;

  explicit Polynomial(std::size_t num_vars = 1);
  Polynomial(std::size_t num_vars, Terms terms);

  static Polynomial constant(std::size_t num_vars, const Rational& c);
  static Polynomial variable(std::size_t num_vars, std::size_t var);
  static Polynomial monomial(const Exponent& exp, const Rational& c = 1);

  std::size_t num_vars() const { return num_vars_; }
  unsigned degree() const { return degree_; }
  bool is_zero() const { return terms_.empty(); }
  const Terms& terms() const { return terms_; }
  Rational coefficient(const Exponent& exp) const;

  Rational eval(std::span<const Rational> point) const;

  Polynomial operator-() const;
  Polynomial& operator+=(const Polynomial& other);
  Polynomial& operator-=(const Polynomial& other);
  Polynomial& operator*=(const Rational& scalar);

  friend Polynomial operator+(Polynomial p, const Polynomial& q) { return p += q; }
  friend Polynomial operator-(Polynomial p, const Polynomial& q) { return p -= q; }
  friend Polynomial operator*(Polynomial p, const Rational& c) { return p *= c; }
  friend Polynomial operator*(const Rational& c, Polynomial p) { return p *= c; }
  friend Polynomial operator*(const Polynomial& p, const Polynomial& q);
  friend bool operator==(const Polynomial& p, const Polynomial& q);

  void check_same_vars(const Polynomial& other) const;

 private:
  void recompute_degree();

  std::size_t num_vars_;
  Terms terms_;
  unsigned degree_ = 0;
};

// Integer coefficients over one shared denominator; dense when univariate.
struct ScaledPoly {
  std::size_t num_vars = 1;
  std::vector<Integer> dense;
  std::map<Exponent, Integer, GradedLex> sparse;
  Integer den = 1;

  bool univariate() const { return num_vars == 1; }
};

ScaledPoly scale_out(const Polynomial& p);
Polynomial scale_in(const ScaledPoly& s);
ScaledPoly multiply(const ScaledPoly& a, const ScaledPoly& b);
ScaledPoly square(const ScaledPoly& a);

ScaledPoly scaled_pow2(const Polynomial& p, unsigned d,
                       unsigned degree_budget = kDefaultDegreeBudget);
ScaledPoly scaled_product(const Polynomial& p, const Polynomial& q);

Polynomial add(const Polynomial& p, const Polynomial& q);
Polynomial mul(const Polynomial& p, const Polynomial& q);

/// p^k by repeated squaring over cleared denominators. Throws BudgetExceeded
/// when k * deg(p) exceeds degree_budget.
Polynomial pow(const Polynomial& p, unsigned long k,
               unsigned degree_budget = kDefaultDegreeBudget);

/// p^(2^d) by d successive squarings.
Polynomial pow2(const Polynomial& p, unsigned d,
                unsigned degree_budget = kDefaultDegreeBudget);

Rational eval(const Polynomial& p, std::span<const Rational> point);

/// Composition p(q) for univariate p and any q.
Polynomial compose(const Polynomial& outer, const Polynomial& inner,
                   unsigned degree_budget = kDefaultDegreeBudget);

}  // namespace momcert
