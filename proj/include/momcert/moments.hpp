#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "momcert/polynomial.hpp"
#include "momcert/rational.hpp"

namespace momcert {

struct Atom {
  std::vector<Rational> point;
  Rational weight;
};

/// Finitely atomic probability measure. Weights are positive and sum to one,
/// points are pairwise distinct.
class AtomicMeasure {
 public:
  explicit AtomicMeasure(std::vector<Atom> atoms);

  std::size_t num_vars() const { return num_vars_; }
  std::size_t size() const { return atoms_.size(); }
  const std::vector<Atom>& atoms() const { return atoms_; }
  Rational min_weight() const;

 private:
  std::vector<Atom> atoms_;
  std::size_t num_vars_ = 1;
};

enum class Family { UniformUnitInterval, StandardGaussian, DiracSeries };

struct ClosedForm {
  Family family = Family::UniformUnitInterval;
  unsigned terms = 0;  // DiracSeries only
};

std::string family_name(const ClosedForm& form);
ClosedForm parse_family(const std::string& name, unsigned terms = 0);

/// Atoms at 1/n with weights 2^-n for n < N; the last atom (n = N) carries
/// 2^-(N-1) so the weights sum to one.
AtomicMeasure dirac_series(unsigned terms);

struct Provenance {
  enum class Kind { Atomic, ClosedForm, File } kind = Kind::File;
  std::string name;  // family name for ClosedForm, free text otherwise

  std::string label() const;
};

/// Truncated linear functional on R[X1..Xm]: one exact value per monomial of
/// total degree <= max_degree, normalized so that L(1) = 1.
class MomentSequence {
 public:
  using Values = std::map<Exponent, Rational, GradedLex>;

  MomentSequence(std::size_t num_vars, unsigned max_degree, Values values,
                 Provenance provenance = {});

  std::size_t num_vars() const { return num_vars_; }
  unsigned max_degree() const { return max_degree_; }
  const Values& values() const { return values_; }
  const Provenance& provenance() const { return provenance_; }

  const Rational& value(const Exponent& exp) const;

  /// L(a). Throws DegreeExceeded when deg(a) > max_degree.
  Rational apply(const Polynomial& a) const;
  Rational apply(const ScaledPoly& a) const;

 private:
  std::size_t num_vars_;
  unsigned max_degree_;
  Values values_;
  Provenance provenance_;
  // Moments as integers over one common denominator.
  Integer common_den_ = 1;
  std::vector<Integer> dense_num_;  // univariate, index = degree
  std::map<Exponent, Integer, GradedLex> sparse_num_;
};

MomentSequence from_atomic(const AtomicMeasure& mu, unsigned max_degree);
MomentSequence from_closed_form(const ClosedForm& form, unsigned max_degree);

Rational apply(const MomentSequence& L, const Polynomial& a);

/// Univariate sequence k -> L(b^k) for k <= floor(D / deg b): the moments of
/// the image of the representing measure under b.
MomentSequence pushforward(const MomentSequence& L, const Polynomial& b);

}  // namespace momcert
