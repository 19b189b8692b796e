#include "momcert/polynomial.hpp"

#include <algorithm>
#include <numeric>

#include "momcert/errors.hpp"

namespace momcert {

Exponent::Exponent(std::vector<std::uint32_t> entries) : entries_(std::move(entries)) {
  total_ = std::accumulate(entries_.begin(), entries_.end(), std::uint32_t{0});
}

Exponent Exponent::zero(std::size_t num_vars) {
  return Exponent(std::vector<std::uint32_t>(num_vars, 0));
}

Exponent Exponent::unit(std::size_t num_vars, std::size_t var) {
  std::vector<std::uint32_t> e(num_vars, 0);
  e.at(var) = 1;
  return Exponent(std::move(e));
}

Exponent Exponent::operator+(const Exponent& other) const {
  if (other.size() != size()) {
    throw Error(ErrorKind::DimensionMismatch, "exponent length mismatch");
  }
  Exponent out;
  out.entries_.resize(entries_.size());
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    out.entries_[i] = entries_[i] + other.entries_[i];
  }
  out.total_ = total_ + other.total_;
  return out;
}

bool GradedLex::operator()(const Exponent& a, const Exponent& b) const {
  if (a.total() != b.total()) return a.total() < b.total();
  // Same total: larger leading powers come first.
  return std::lexicographical_compare(b.entries().begin(), b.entries().end(),
                                      a.entries().begin(), a.entries().end());
}

namespace {

void compositions(std::size_t num_vars, unsigned total, std::size_t pos,
                  std::vector<std::uint32_t>& current, std::vector<Exponent>& out) {
  if (pos + 1 == num_vars) {
    current[pos] = total;
    out.emplace_back(current);
    return;
  }
  for (unsigned k = total + 1; k-- > 0;) {
    current[pos] = k;
    compositions(num_vars, total - k, pos + 1, current, out);
  }
}

}  // namespace

std::vector<Exponent> monomials_up_to(std::size_t num_vars, unsigned max_total) {
  std::vector<Exponent> out;
  std::vector<std::uint32_t> current(num_vars, 0);
  for (unsigned total = 0; total <= max_total; ++total) {
    compositions(num_vars, total, 0, current, out);
  }
  return out;
}

Polynomial::Polynomial(std::size_t num_vars) : num_vars_(num_vars) {
  if (num_vars == 0) throw Error(ErrorKind::DimensionMismatch, "num_vars must be >= 1");
}

Polynomial::Polynomial(std::size_t num_vars, Terms terms)
    : num_vars_(num_vars), terms_(std::move(terms)) {
  if (num_vars == 0) throw Error(ErrorKind::DimensionMismatch, "num_vars must be >= 1");
  for (auto it = terms_.begin(); it != terms_.end();) {
    if (it->first.size() != num_vars_) {
      throw Error(ErrorKind::DimensionMismatch, "exponent length differs from num_vars");
    }
    it = sgn(it->second) == 0 ? terms_.erase(it) : std::next(it);
  }
  recompute_degree();
}

Polynomial Polynomial::constant(std::size_t num_vars, const Rational& c) {
  Terms t;
  t.emplace(Exponent::zero(num_vars), c);
  return Polynomial(num_vars, std::move(t));
}

Polynomial Polynomial::variable(std::size_t num_vars, std::size_t var) {
  Terms t;
  t.emplace(Exponent::unit(num_vars, var), Rational(1));
  return Polynomial(num_vars, std::move(t));
}

Polynomial Polynomial::monomial(const Exponent& exp, const Rational& c) {
  Terms t;
  t.emplace(exp, c);
  return Polynomial(exp.size(), std::move(t));
}

Rational Polynomial::coefficient(const Exponent& exp) const {
  auto it = terms_.find(exp);
  return it == terms_.end() ? Rational(0) : it->second;
}

Rational Polynomial::eval(std::span<const Rational> point) const {
  if (point.size() != num_vars_) {
    throw Error(ErrorKind::DimensionMismatch, "evaluation point has wrong length");
  }
  Rational sum = 0;
  for (const auto& [exp, c] : terms_) {
    Rational term = c;
    for (std::size_t i = 0; i < num_vars_; ++i) {
      if (exp[i] != 0) term *= momcert::pow(point[i], exp[i]);
    }
    sum += term;
  }
  return sum;
}

Polynomial Polynomial::operator-() const {
  Polynomial out = *this;
  for (auto& [exp, c] : out.terms_) c = -c;
  return out;
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
  check_same_vars(other);
  for (const auto& [exp, c] : other.terms_) {
    auto [it, inserted] = terms_.try_emplace(exp, c);
    if (!inserted) {
      it->second += c;
      if (sgn(it->second) == 0) terms_.erase(it);
    }
  }
  recompute_degree();
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& other) { return *this += -other; }

Polynomial& Polynomial::operator*=(const Rational& scalar) {
  if (sgn(scalar) == 0) {
    terms_.clear();
  } else {
    for (auto& [exp, c] : terms_) c *= scalar;
  }
  recompute_degree();
  return *this;
}

bool operator==(const Polynomial& p, const Polynomial& q) {
  return p.num_vars_ == q.num_vars_ && p.terms_ == q.terms_;
}

void Polynomial::check_same_vars(const Polynomial& other) const {
  if (other.num_vars_ != num_vars_) {
    throw Error(ErrorKind::DimensionMismatch,
                "polynomials in " + std::to_string(num_vars_) + " and " +
                    std::to_string(other.num_vars_) + " variables");
  }
}

void Polynomial::recompute_degree() {
  // Terms are graded, so the last key has the largest total.
  degree_ = terms_.empty() ? 0 : terms_.rbegin()->first.total();
}

namespace {

ScaledPoly scale_out_impl(const Polynomial& p) {
  ScaledPoly s;
  s.num_vars = p.num_vars();
  Integer den = 1;
  for (const auto& [exp, c] : p.terms()) {
    mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den_mpz_t());
  }
  s.den = den;
  if (s.univariate()) {
    s.dense.assign(p.degree() + 1, Integer(0));
    for (const auto& [exp, c] : p.terms()) {
      s.dense[exp[0]] = c.get_num() * (den / c.get_den());
    }
  } else {
    for (const auto& [exp, c] : p.terms()) {
      s.sparse.emplace(exp, c.get_num() * (den / c.get_den()));
    }
  }
  return s;
}

}  // namespace

ScaledPoly scale_out(const Polynomial& p) { return scale_out_impl(p); }

Polynomial scale_in(const ScaledPoly& s) {
  Polynomial::Terms terms;
  if (s.univariate()) {
    for (std::size_t k = 0; k < s.dense.size(); ++k) {
      if (s.dense[k] == 0) continue;
      Rational c(s.dense[k], s.den);
      c.canonicalize();
      terms.emplace_hint(terms.end(), Exponent({static_cast<std::uint32_t>(k)}), std::move(c));
    }
  } else {
    for (const auto& [exp, v] : s.sparse) {
      if (v == 0) continue;
      Rational c(v, s.den);
      c.canonicalize();
      terms.emplace_hint(terms.end(), exp, std::move(c));
    }
  }
  return Polynomial(s.num_vars, std::move(terms));
}

ScaledPoly multiply(const ScaledPoly& a, const ScaledPoly& b) {
  ScaledPoly out;
  out.num_vars = a.num_vars;
  out.den = a.den * b.den;
  if (a.univariate()) {
    if (a.dense.empty() || b.dense.empty()) return out;
    out.dense.assign(a.dense.size() + b.dense.size() - 1, Integer(0));
    for (std::size_t i = 0; i < a.dense.size(); ++i) {
      if (a.dense[i] == 0) continue;
      for (std::size_t j = 0; j < b.dense.size(); ++j) {
        mpz_addmul(out.dense[i + j].get_mpz_t(), a.dense[i].get_mpz_t(),
                   b.dense[j].get_mpz_t());
      }
    }
  } else {
    for (const auto& [ea, ca] : a.sparse) {
      for (const auto& [eb, cb] : b.sparse) {
        auto [it, inserted] = out.sparse.try_emplace(ea + eb, 0);
        mpz_addmul(it->second.get_mpz_t(), ca.get_mpz_t(), cb.get_mpz_t());
      }
    }
  }
  return out;
}

ScaledPoly square(const ScaledPoly& a) {
  if (!a.univariate()) return multiply(a, a);
  ScaledPoly out;
  out.num_vars = 1;
  out.den = a.den * a.den;
  if (a.dense.empty()) return out;
  const std::size_t n = a.dense.size();
  out.dense.assign(2 * n - 1, Integer(0));
  for (std::size_t i = 0; i < n; ++i) {
    if (a.dense[i] == 0) continue;
    for (std::size_t j = i + 1; j < n; ++j) {
      mpz_addmul(out.dense[i + j].get_mpz_t(), a.dense[i].get_mpz_t(), a.dense[j].get_mpz_t());
    }
  }
  for (auto& v : out.dense) v *= 2;
  for (std::size_t i = 0; i < n; ++i) {
    mpz_addmul(out.dense[2 * i].get_mpz_t(), a.dense[i].get_mpz_t(), a.dense[i].get_mpz_t());
  }
  return out;
}

namespace {

void check_budget(const Polynomial& p, unsigned long k, unsigned budget) {
  if (p.degree() != 0 && k > budget / p.degree()) {
    throw Error(ErrorKind::BudgetExceeded,
                "power of degree " + std::to_string(p.degree()) + " polynomial to exponent " +
                    std::to_string(k) + " exceeds degree budget " + std::to_string(budget));
  }
}

}  // namespace

Polynomial operator*(const Polynomial& p, const Polynomial& q) {
  p.check_same_vars(q);
  if (p.is_zero() || q.is_zero()) return Polynomial(p.num_vars());
  return scale_in(multiply(scale_out(p), scale_out(q)));
}

Polynomial add(const Polynomial& p, const Polynomial& q) { return p + q; }
Polynomial mul(const Polynomial& p, const Polynomial& q) { return p * q; }

Polynomial pow(const Polynomial& p, unsigned long k, unsigned degree_budget) {
  check_budget(p, k, degree_budget);
  if (k == 0) return Polynomial::constant(p.num_vars(), 1);
  if (p.is_zero()) return p;
  ScaledPoly base = scale_out(p);
  ScaledPoly result;
  bool have_result = false;
  while (true) {
    if (k & 1UL) {
      result = have_result ? multiply(result, base) : base;
      have_result = true;
    }
    k >>= 1;
    if (k == 0) break;
    base = square(base);
  }
  return scale_in(result);
}

ScaledPoly scaled_pow2(const Polynomial& p, unsigned d, unsigned degree_budget) {
  if (d >= 63) throw Error(ErrorKind::BudgetExceeded, "pow2 exponent too large");
  check_budget(p, 1UL << d, degree_budget);
  ScaledPoly s = scale_out(p);
  if (p.is_zero()) return s;
  for (unsigned i = 0; i < d; ++i) s = square(s);
  return s;
}

ScaledPoly scaled_product(const Polynomial& p, const Polynomial& q) {
  p.check_same_vars(q);
  return multiply(scale_out(p), scale_out(q));
}

Polynomial pow2(const Polynomial& p, unsigned d, unsigned degree_budget) {
  if (p.is_zero()) {
    check_budget(p, 1UL << d, degree_budget);
    return p;
  }
  return scale_in(scaled_pow2(p, d, degree_budget));
}

Rational eval(const Polynomial& p, std::span<const Rational> point) { return p.eval(point); }

Polynomial compose(const Polynomial& outer, const Polynomial& inner, unsigned degree_budget) {
  if (outer.num_vars() != 1) {
    throw Error(ErrorKind::DimensionMismatch, "compose expects a univariate outer polynomial");
  }
  check_budget(inner, outer.degree(), degree_budget);
  Polynomial result(inner.num_vars());
  for (unsigned k = outer.degree() + 1; k-- > 0;) {
    result = result * inner;
    Rational c = outer.coefficient(Exponent({k}));
    if (sgn(c) != 0) result += Polynomial::constant(inner.num_vars(), c);
  }
  return result;
}

}  // namespace momcert
