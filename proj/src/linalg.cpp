#include "momcert/linalg.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "momcert/errors.hpp"

namespace momcert {

bool RationalMatrix::is_symmetric() const {
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = i + 1; j < n_; ++j) {
      if ((*this)(i, j) != (*this)(j, i)) return false;
    }
  }
  return true;
}

const char* to_string(PsdVerdict v) {
  switch (v) {
    case PsdVerdict::PSD: return "PSD";
    case PsdVerdict::NotPSD: return "NotPSD";
    case PsdVerdict::Borderline: return "Borderline";
  }
  return "?";
}

namespace {

void require_degree(unsigned needed, unsigned available) {
  if (needed > available) {
    throw Error(ErrorKind::DegreeExceeded, "DegreeExceeded(" + std::to_string(needed) + ", " +
                                               std::to_string(available) + ")");
  }
}

}  // namespace

RationalMatrix moment_matrix(const MomentSequence& L, unsigned t) {
  require_degree(2 * t, L.max_degree());
  const auto rows = monomials_up_to(L.num_vars(), t);
  RationalMatrix m(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = i; j < rows.size(); ++j) {
      m(i, j) = L.value(rows[i] + rows[j]);
      m(j, i) = m(i, j);
    }
  }
  return m;
}

RationalMatrix localizing_matrix(const MomentSequence& L, const Polynomial& a, unsigned t) {
  require_degree(2 * t + a.degree(), L.max_degree());
  const auto rows = monomials_up_to(L.num_vars(), t);
  RationalMatrix m(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = i; j < rows.size(); ++j) {
      Rational sum = 0;
      const Exponent shift = rows[i] + rows[j];
      for (const auto& [exp, c] : a.terms()) sum += c * L.value(shift + exp);
      m(i, j) = sum;
      m(j, i) = sum;
    }
  }
  return m;
}

bool exact_psd(const RationalMatrix& m) {
  if (!m.is_symmetric()) throw Error(ErrorKind::NotSymmetric, "matrix is not symmetric");
  RationalMatrix a = m;
  std::vector<std::size_t> active(a.size());
  for (std::size_t i = 0; i < active.size(); ++i) active[i] = i;
  while (!active.empty()) {
    std::size_t pivot_pos = active.size();
    for (std::size_t k = 0; k < active.size(); ++k) {
      int s = sgn(a(active[k], active[k]));
      if (s < 0) return false;
      if (s > 0 && pivot_pos == active.size()) pivot_pos = k;
    }
    if (pivot_pos == active.size()) {
      // Zero diagonal: PSD only if the remaining block vanishes.
      for (auto i : active) {
        for (auto j : active) {
          if (sgn(a(i, j)) != 0) return false;
        }
      }
      return true;
    }
    const std::size_t p = active[pivot_pos];
    active.erase(active.begin() + static_cast<std::ptrdiff_t>(pivot_pos));
    const Rational inv = 1 / a(p, p);
    for (auto i : active) {
      if (sgn(a(i, p)) == 0) continue;
      const Rational f = a(i, p) * inv;
      for (auto j : active) {
        if (j < i) continue;
        a(i, j) -= f * a(p, j);
        a(j, i) = a(i, j);
      }
    }
  }
  return true;
}

namespace {

std::vector<std::vector<Integer>> integer_rows(const RationalMatrix& m) {
  const std::size_t n = m.size();
  std::vector<std::vector<Integer>> rows(n, std::vector<Integer>(n));
  for (std::size_t i = 0; i < n; ++i) {
    Integer den = 1;
    for (std::size_t j = 0; j < n; ++j) {
      mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), m(i, j).get_den_mpz_t());
    }
    for (std::size_t j = 0; j < n; ++j) {
      rows[i][j] = m(i, j).get_num() * (den / m(i, j).get_den());
    }
  }
  return rows;
}

}  // namespace

std::size_t exact_rank(const RationalMatrix& m) {
  auto a = integer_rows(m);
  const std::size_t n = m.size();
  std::size_t rank = 0;
  Integer prev = 1;
  for (std::size_t col = 0; col < n && rank < n; ++col) {
    std::size_t pivot = rank;
    while (pivot < n && a[pivot][col] == 0) ++pivot;
    if (pivot == n) continue;
    std::swap(a[pivot], a[rank]);
    for (std::size_t i = rank + 1; i < n; ++i) {
      for (std::size_t j = col + 1; j < n; ++j) {
        a[i][j] = a[i][j] * a[rank][col] - a[i][col] * a[rank][j];
        mpz_divexact(a[i][j].get_mpz_t(), a[i][j].get_mpz_t(), prev.get_mpz_t());
      }
      a[i][col] = 0;
    }
    prev = a[rank][col];
    ++rank;
  }
  return rank;
}

std::vector<Rational> monic_kernel(const RationalMatrix& m) {
  // Solve the leading (n-1) x (n-1) block against minus the last column.
  const std::size_t n = m.size();
  if (n == 0) return {};
  const std::size_t k = n - 1;
  std::vector<std::vector<Rational>> a(k, std::vector<Rational>(k + 1));
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) a[i][j] = m(i, j);
    a[i][k] = -m(i, k);
  }
  for (std::size_t col = 0; col < k; ++col) {
    std::size_t pivot = col;
    while (pivot < k && sgn(a[pivot][col]) == 0) ++pivot;
    if (pivot == k) return {};
    std::swap(a[pivot], a[col]);
    for (std::size_t i = 0; i < k; ++i) {
      if (i == col || sgn(a[i][col]) == 0) continue;
      const Rational f = a[i][col] / a[col][col];
      for (std::size_t j = col; j <= k; ++j) a[i][j] -= f * a[col][j];
    }
  }
  std::vector<Rational> x(n);
  for (std::size_t i = 0; i < k; ++i) x[i] = a[i][k] / a[i][i];
  x[k] = 1;
  return x;
}

PsdReport psd_check(const RationalMatrix& m, double relative_tolerance) {
  if (!m.is_symmetric()) throw Error(ErrorKind::NotSymmetric, "matrix is not symmetric");
  PsdReport report;
  report.size = m.size();
  if (m.size() == 0) return report;
  Eigen::MatrixXd dm(m.size(), m.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = 0; j < m.size(); ++j) {
      dm(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = to_double(m(i, j));
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(dm, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd& ev = solver.eigenvalues();
  const double scale = ev.cwiseAbs().maxCoeff();
  report.min_eigenvalue = ev.minCoeff();
  report.tolerance = relative_tolerance * scale;
  report.rank_estimate =
      static_cast<std::size_t>((ev.array() > report.tolerance).count());
  if (report.min_eigenvalue < -report.tolerance) {
    report.verdict = PsdVerdict::NotPSD;
  } else if (report.min_eigenvalue > report.tolerance) {
    report.verdict = PsdVerdict::PSD;
  } else {
    report.exact_tiebreak = true;
    report.verdict = exact_psd(m) ? PsdVerdict::PSD : PsdVerdict::Borderline;
  }
  return report;
}

bool cbs_check(const MomentSequence& L, const Polynomial& a, const Polynomial& b) {
  const Rational lab = L.apply(scaled_product(a, b));
  const Rational laa = L.apply(scaled_product(a, a));
  const Rational lbb = L.apply(scaled_product(b, b));
  return lab * lab <= laa * lbb;
}

}  // namespace momcert

namespace momcert {

std::vector<std::size_t> leading_ranks_psd(const RationalMatrix& m,
                                           const std::vector<std::size_t>& block_sizes) {
  if (!m.is_symmetric()) throw Error(ErrorKind::NotSymmetric, "matrix is not symmetric");
  RationalMatrix a = m;
  const std::size_t n = a.size();
  std::vector<std::size_t> out;
  std::size_t next_block = 0;
  std::size_t rank = 0;
  auto record = [&](std::size_t processed) {
    while (next_block < block_sizes.size() && block_sizes[next_block] == processed) {
      out.push_back(rank);
      ++next_block;
    }
  };
  record(0);
  for (std::size_t k = 0; k < n; ++k) {
    const int s = sgn(a(k, k));
    if (s < 0) return {};
    if (s == 0) {
      // A PSD Schur complement with a zero diagonal has a zero row.
      for (std::size_t j = k + 1; j < n; ++j) {
        if (sgn(a(k, j)) != 0) return {};
      }
    } else {
      ++rank;
      const Rational inv = 1 / a(k, k);
      for (std::size_t i = k + 1; i < n; ++i) {
        if (sgn(a(i, k)) == 0) continue;
        const Rational f = a(i, k) * inv;
        for (std::size_t j = i; j < n; ++j) {
          a(i, j) -= f * a(k, j);
          a(j, i) = a(i, j);
        }
      }
    }
    record(k + 1);
  }
  return out;
}

}  // namespace momcert

namespace momcert {

RankLadder moment_rank_ladder(const MomentSequence& L, std::size_t max_size) {
  unsigned top = L.max_degree() / 2;
  std::vector<std::size_t> sizes;
  for (unsigned t = 0; t <= top; ++t) {
    const std::size_t s = monomials_up_to(L.num_vars(), t).size();
    if (s > max_size && t > 0) {
      top = t - 1;
      break;
    }
    sizes.push_back(s);
  }
  RankLadder out;
  out.ranks = leading_ranks_psd(moment_matrix(L, top), sizes);
  if (out.ranks.empty()) {
    out.psd = false;
    for (unsigned t = 0; t <= top; ++t) out.ranks.push_back(exact_rank(moment_matrix(L, t)));
  }
  for (unsigned t = 0; t + 1 < out.ranks.size(); ++t) {
    if (out.ranks[t] == out.ranks[t + 1]) {
      out.flat_level = t;
      break;
    }
  }
  return out;
}

}  // namespace momcert
