#include "momcert/moments.hpp"

#include <algorithm>
#include <set>

#include "momcert/errors.hpp"

namespace momcert {

AtomicMeasure::AtomicMeasure(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
  if (atoms_.empty()) throw Error(ErrorKind::Validation, "atomic measure needs at least one atom");
  num_vars_ = atoms_.front().point.size();
  if (num_vars_ == 0) throw Error(ErrorKind::Validation, "atom with empty point");
  Rational total = 0;
  std::set<std::vector<Rational>> seen;
  for (const auto& atom : atoms_) {
    if (atom.point.size() != num_vars_) {
      throw Error(ErrorKind::DimensionMismatch, "atoms have different dimensions");
    }
    if (sgn(atom.weight) <= 0) throw Error(ErrorKind::Validation, "atom weight must be positive");
    if (!seen.insert(atom.point).second) {
      throw Error(ErrorKind::Validation, "atom points must be pairwise distinct");
    }
    total += atom.weight;
  }
  if (total != 1) {
    throw Error(ErrorKind::Validation, "atom weights sum to " + to_string(total) + ", not 1");
  }
}

Rational AtomicMeasure::min_weight() const {
  Rational m = atoms_.front().weight;
  for (const auto& a : atoms_) m = std::min(m, a.weight);
  return m;
}

std::string family_name(const ClosedForm& form) {
  switch (form.family) {
    case Family::UniformUnitInterval: return "uniform01";
    case Family::StandardGaussian: return "gaussian";
    case Family::DiracSeries: return "dirac" + std::to_string(form.terms);
  }
  return "unknown";
}

ClosedForm parse_family(const std::string& name, unsigned terms) {
  if (name == "uniform01" || name == "uniform") return {Family::UniformUnitInterval, 0};
  if (name == "gaussian" || name == "normal") return {Family::StandardGaussian, 0};
  if (name.rfind("dirac", 0) == 0) {
    std::string rest = name.substr(5);
    unsigned n = terms;
    if (!rest.empty()) {
      if (rest.find_first_not_of("0123456789") != std::string::npos) {
        throw Error(ErrorKind::UnsupportedFamily, "unsupported family '" + name + "'");
      }
      n = static_cast<unsigned>(std::stoul(rest));
    }
    if (n == 0) throw Error(ErrorKind::UnsupportedFamily, "dirac series needs at least one term");
    return {Family::DiracSeries, n};
  }
  throw Error(ErrorKind::UnsupportedFamily, "unsupported family '" + name + "'");
}

AtomicMeasure dirac_series(unsigned terms) {
  if (terms == 0) throw Error(ErrorKind::UnsupportedFamily, "dirac series needs at least one term");
  std::vector<Atom> atoms;
  for (unsigned n = 1; n <= terms; ++n) {
    Integer den = 1;
    den <<= (n < terms ? n : n - 1);
    atoms.push_back({{Rational(1, n)}, Rational(Integer(1), den)});
  }
  return AtomicMeasure(std::move(atoms));
}

std::string Provenance::label() const {
  switch (kind) {
    case Kind::Atomic: return "atomic";
    case Kind::ClosedForm: return "closed_form:" + name;
    case Kind::File: return name.empty() ? "file" : name;
  }
  return "file";
}

MomentSequence::MomentSequence(std::size_t num_vars, unsigned max_degree, Values values,
                               Provenance provenance)
    : num_vars_(num_vars),
      max_degree_(max_degree),
      values_(std::move(values)),
      provenance_(std::move(provenance)) {
  if (num_vars_ == 0) throw Error(ErrorKind::Validation, "num_vars must be >= 1");
  for (const auto& [exp, v] : values_) {
    if (exp.size() != num_vars_) {
      throw Error(ErrorKind::Validation, "moment exponent length differs from num_vars");
    }
    if (exp.total() > max_degree_) {
      throw Error(ErrorKind::Validation, "moment exponent exceeds max_degree");
    }
  }
  for (const auto& exp : monomials_up_to(num_vars_, max_degree_)) {
    if (!values_.contains(exp)) {
      std::string e;
      for (auto x : exp.entries()) e += (e.empty() ? "" : ",") + std::to_string(x);
      throw Error(ErrorKind::Validation, "missing moment for exponent [" + e + "]");
    }
  }
  if (value(Exponent::zero(num_vars_)) != 1) {
    throw Error(ErrorKind::Validation, "moment sequence is not normalized: L(1) != 1");
  }
  for (const auto& [exp, v] : values_) {
    mpz_lcm(common_den_.get_mpz_t(), common_den_.get_mpz_t(), v.get_den_mpz_t());
  }
  for (const auto& [exp, v] : values_) {
    Integer num = v.get_num() * (common_den_ / v.get_den());
    if (num_vars_ == 1) {
      dense_num_.push_back(std::move(num));
    } else {
      sparse_num_.emplace_hint(sparse_num_.end(), exp, std::move(num));
    }
  }
}

const Rational& MomentSequence::value(const Exponent& exp) const {
  if (exp.total() > max_degree_) {
    throw Error(ErrorKind::DegreeExceeded, "moment of degree " + std::to_string(exp.total()) +
                                               " requested, truncation degree is " +
                                               std::to_string(max_degree_));
  }
  return values_.at(exp);
}

Rational MomentSequence::apply(const Polynomial& a) const {
  if (a.num_vars() != num_vars_) {
    throw Error(ErrorKind::DimensionMismatch, "polynomial and moment sequence dimensions differ");
  }
  if (a.degree() > max_degree_) {
    throw Error(ErrorKind::DegreeExceeded, "DegreeExceeded(" + std::to_string(a.degree()) + ", " +
                                               std::to_string(max_degree_) + ")");
  }
  return apply(scale_out(a));
}

Rational MomentSequence::apply(const ScaledPoly& a) const {
  if (a.num_vars != num_vars_) {
    throw Error(ErrorKind::DimensionMismatch, "polynomial and moment sequence dimensions differ");
  }
  Integer sum = 0;
  if (a.univariate()) {
    if (a.dense.size() > max_degree_ + 1) {
      throw Error(ErrorKind::DegreeExceeded, "DegreeExceeded(" + std::to_string(a.dense.size() - 1) +
                                                 ", " + std::to_string(max_degree_) + ")");
    }
    for (std::size_t k = 0; k < a.dense.size(); ++k) {
      mpz_addmul(sum.get_mpz_t(), a.dense[k].get_mpz_t(), dense_num_[k].get_mpz_t());
    }
  } else {
    for (const auto& [exp, c] : a.sparse) {
      if (c == 0) continue;
      const auto it = sparse_num_.find(exp);
      if (it == sparse_num_.end()) {
        throw Error(ErrorKind::DegreeExceeded, "DegreeExceeded(" + std::to_string(exp.total()) +
                                                   ", " + std::to_string(max_degree_) + ")");
      }
      mpz_addmul(sum.get_mpz_t(), c.get_mpz_t(), it->second.get_mpz_t());
    }
  }
  Rational out(sum, a.den * common_den_);
  out.canonicalize();
  return out;
}

Rational apply(const MomentSequence& L, const Polynomial& a) { return L.apply(a); }

MomentSequence from_atomic(const AtomicMeasure& mu, unsigned max_degree) {
  const std::size_t m = mu.num_vars();
  const auto exps = monomials_up_to(m, max_degree);
  MomentSequence::Values values;
  for (const auto& e : exps) values.emplace_hint(values.end(), e, Rational(0));
  for (const auto& atom : mu.atoms()) {
    // powers[i][k] = x_i^k
    std::vector<std::vector<Rational>> powers(m);
    for (std::size_t i = 0; i < m; ++i) {
      powers[i].resize(max_degree + 1);
      powers[i][0] = 1;
      for (unsigned k = 1; k <= max_degree; ++k) powers[i][k] = powers[i][k - 1] * atom.point[i];
    }
    for (auto& [e, v] : values) {
      Rational term = atom.weight;
      for (std::size_t i = 0; i < m; ++i) term *= powers[i][e[i]];
      v += term;
    }
  }
  return MomentSequence(m, max_degree, std::move(values), {Provenance::Kind::Atomic, ""});
}

MomentSequence from_closed_form(const ClosedForm& form, unsigned max_degree) {
  if (form.family == Family::DiracSeries) {
    MomentSequence atomic = from_atomic(dirac_series(form.terms), max_degree);
    return MomentSequence(1, max_degree, atomic.values(),
                          {Provenance::Kind::ClosedForm, family_name(form)});
  }
  MomentSequence::Values values;
  Integer double_factorial = 1;  // (k-1)!! for even k
  for (unsigned k = 0; k <= max_degree; ++k) {
    Rational v;
    if (form.family == Family::UniformUnitInterval) {
      v = Rational(1, k + 1);
    } else if (k % 2 == 1) {
      v = 0;
    } else {
      if (k >= 2) double_factorial *= (k - 1);
      v = Rational(double_factorial);
    }
    values.emplace_hint(values.end(), Exponent({k}), v);
  }
  return MomentSequence(1, max_degree, std::move(values),
                        {Provenance::Kind::ClosedForm, family_name(form)});
}

MomentSequence pushforward(const MomentSequence& L, const Polynomial& b) {
  if (b.degree() == 0) {
    throw Error(ErrorKind::Validation, "pushforward needs a nonconstant polynomial");
  }
  const unsigned top = L.max_degree() / b.degree();
  MomentSequence::Values values;
  const ScaledPoly base = scale_out(b);
  ScaledPoly power = scale_out(Polynomial::constant(L.num_vars(), 1));
  for (unsigned k = 0; k <= top; ++k) {
    if (k > 0) power = multiply(power, base);
    values.emplace_hint(values.end(), Exponent({k}), L.apply(power));
  }
  return MomentSequence(1, top, std::move(values), {Provenance::Kind::File, "pushforward"});
}

}  // namespace momcert
