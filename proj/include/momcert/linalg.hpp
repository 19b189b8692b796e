#pragma once

#include <optional>
#include <vector>

#include "momcert/moments.hpp"
#include "momcert/polynomial.hpp"
#include "momcert/rational.hpp"

namespace momcert {

/// Dense square matrix of exact rationals, row-major.
class RationalMatrix {
 public:
  explicit RationalMatrix(std::size_t n = 0) : n_(n), data_(n * n) {}

  std::size_t size() const { return n_; }
  Rational& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
  const Rational& operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }

  bool is_symmetric() const;

  friend bool operator==(const RationalMatrix&, const RationalMatrix&) = default;

 private:
  std::size_t n_;
  std::vector<Rational> data_;
};

inline constexpr double kDefaultPsdTolerance = 1e-9;

enum class PsdVerdict { PSD, NotPSD, Borderline };
const char* to_string(PsdVerdict v);

struct PsdReport {
  std::size_t size = 0;
  double min_eigenvalue = 0.0;
  double tolerance = 0.0;      // absolute: relative tolerance times max |eigenvalue|
  PsdVerdict verdict = PsdVerdict::PSD;
  std::size_t rank_estimate = 0;  // eigenvalues above tolerance
  bool exact_tiebreak = false;    // verdict decided by exact elimination
};

/// Rows and columns indexed by the monomials of degree <= t in graded lex
/// order; entry (g, h) = L(X^(g+h)). Requires 2t <= D.
RationalMatrix moment_matrix(const MomentSequence& L, unsigned t);

/// Entry (g, h) = L(X^(g+h) * a). Requires 2t + deg(a) <= D.
RationalMatrix localizing_matrix(const MomentSequence& L, const Polynomial& a, unsigned t);

/// Floating eigenvalues of the exactly-given matrix. Eigenvalues within the
/// tolerance band around zero are resolved by exact rational elimination:
/// PSD if the matrix is exactly PSD, Borderline otherwise.
PsdReport psd_check(const RationalMatrix& m, double relative_tolerance = kDefaultPsdTolerance);

/// Exact PSD test by symmetric elimination over the rationals.
bool exact_psd(const RationalMatrix& m);

/// Exact rank by fraction-free elimination.
std::size_t exact_rank(const RationalMatrix& m);

/// Exact kernel vector of a matrix with a one-dimensional null space in the
/// last coordinate direction, normalized so that the last entry is 1.
/// Returns an empty vector if the leading block is singular.
std::vector<Rational> monic_kernel(const RationalMatrix& m);

/// L(ab)^2 <= L(a^2) L(b^2), compared exactly.
bool cbs_check(const MomentSequence& L, const Polynomial& a, const Polynomial& b);

}  // namespace momcert

namespace momcert {

/// Ranks of the leading principal blocks of sizes block_sizes (ascending),
/// from one symmetric elimination pass. Exact, but only valid for PSD input:
/// returns an empty vector if the elimination finds the matrix is not PSD.
std::vector<std::size_t> leading_ranks_psd(const RationalMatrix& m,
                                           const std::vector<std::size_t>& block_sizes);

}  // namespace momcert

namespace momcert {

struct RankLadder {
  std::vector<std::size_t> ranks;  // exact rank of the moment matrix at t = 0, 1, ...
  std::optional<unsigned> flat_level;  // smallest t with rank(M_t) = rank(M_{t+1})
  bool psd = true;                 // false if elimination found a negative direction
};

/// Exact ranks of the nested moment matrices up to the largest level whose
/// matrix has at most max_size rows (and 2t <= D).
RankLadder moment_rank_ladder(const MomentSequence& L, std::size_t max_size = 130);

}  // namespace momcert
