#include "momcert/oracle.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>

#include "momcert/errors.hpp"
#include "momcert/linalg.hpp"

namespace momcert {

const char* to_string(RecoveryMethod m) {
  return m == RecoveryMethod::Prony1D ? "Prony1D" : "GridScan";
}

double moment_residual(const MomentSequence& L, const std::vector<RecoveredAtom>& atoms,
                       unsigned max_total) {
  double worst = 0.0;
  for (const auto& exp : monomials_up_to(L.num_vars(), std::min(max_total, L.max_degree()))) {
    long double sum = 0.0L;
    for (const auto& atom : atoms) {
      long double term = atom.weight;
      for (std::size_t i = 0; i < exp.size(); ++i) {
        term *= std::pow(static_cast<long double>(atom.point[i]), static_cast<int>(exp[i]));
      }
      sum += term;
    }
    worst = std::max(worst, static_cast<double>(std::fabs(sum - static_cast<long double>(
                                                                    to_double(L.value(exp))))));
  }
  return worst;
}

namespace {

using VectorL = Eigen::Matrix<long double, Eigen::Dynamic, 1>;
using MatrixL = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;

long double horner(const std::vector<long double>& c, long double x, long double* derivative) {
  long double value = 0.0L;
  long double slope = 0.0L;
  for (std::size_t k = c.size(); k-- > 0;) {
    slope = slope * x + value;
    value = value * x + c[k];
  }
  if (derivative) *derivative = slope;
  return value;
}

std::vector<double> real_roots(const std::vector<Rational>& monic) {
  const std::size_t n = monic.size() - 1;
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n),
                                                    static_cast<Eigen::Index>(n));
  for (std::size_t i = 1; i < n; ++i) {
    companion(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i - 1)) = 1.0;
  }
  for (std::size_t i = 0; i < n; ++i) {
    companion(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(n - 1)) =
        -to_double(monic[i]);
  }
  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
  std::vector<long double> coeffs;
  for (const auto& c : monic) coeffs.push_back(static_cast<long double>(to_double(c)));
  std::vector<double> roots;
  for (Eigen::Index k = 0; k < solver.eigenvalues().size(); ++k) {
    const auto z = solver.eigenvalues()[k];
    if (std::fabs(z.imag()) > 1e-6 * (1.0 + std::fabs(z.real()))) {
      throw Error(ErrorKind::IllConditioned, "kernel polynomial has complex roots");
    }
    long double x = z.real();
    for (int it = 0; it < 8; ++it) {
      long double slope = 0.0L;
      const long double v = horner(coeffs, x, &slope);
      if (slope == 0.0L) break;
      x -= v / slope;
    }
    roots.push_back(static_cast<double>(x));
  }
  std::sort(roots.begin(), roots.end());
  for (std::size_t k = 0; k + 1 < roots.size(); ++k) {
    if (roots[k + 1] - roots[k] < 1e-8) {
      throw Error(ErrorKind::IllConditioned, "recovered atoms closer than 1e-8");
    }
  }
  return roots;
}

}  // namespace

RecoveryResult prony_recover(const MomentSequence& L) {
  if (L.num_vars() != 1) {
    throw Error(ErrorKind::DimensionMismatch, "prony_recover needs a univariate sequence");
  }
  const RankLadder ladder = moment_rank_ladder(L);
  if (!ladder.psd) throw Error(ErrorKind::RankUnstable, "moment matrix is not PSD");
  if (!ladder.flat_level) {
    throw Error(ErrorKind::RankUnstable,
                "Hankel rank does not stabilize up to level " +
                    std::to_string(ladder.ranks.size() - 1) + "; input likely not atomic");
  }
  const std::size_t n = ladder.ranks[*ladder.flat_level];
  const auto kernel = monic_kernel(moment_matrix(L, static_cast<unsigned>(n)));
  if (kernel.empty()) throw Error(ErrorKind::IllConditioned, "leading Hankel block is singular");
  const auto roots = real_roots(kernel);

  MatrixL vandermonde(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  VectorL rhs(static_cast<Eigen::Index>(n));
  for (std::size_t k = 0; k < n; ++k) {
    rhs(static_cast<Eigen::Index>(k)) = to_double(L.value(Exponent({static_cast<std::uint32_t>(k)})));
    for (std::size_t j = 0; j < n; ++j) {
      vandermonde(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) =
          std::pow(static_cast<long double>(roots[j]), static_cast<int>(k));
    }
  }
  const VectorL w = vandermonde.colPivHouseholderQr().solve(rhs);

  RecoveryResult result;
  result.method = RecoveryMethod::Prony1D;
  long double total = 0.0L;
  for (std::size_t j = 0; j < n; ++j) {
    const double weight = static_cast<double>(w(static_cast<Eigen::Index>(j)));
    if (!(weight > 0.0)) {
      throw Error(ErrorKind::IllConditioned, "recovered weight is not positive");
    }
    result.atoms.push_back({{roots[j]}, weight});
    total += weight;
  }
  if (std::fabs(static_cast<double>(total) - 1.0) < 1e-6) {
    for (auto& a : result.atoms) a.weight = static_cast<double>(a.weight / total);
  }
  result.residual = moment_residual(L, result.atoms, static_cast<unsigned>(2 * n));
  return result;
}

RecoveryResult grid_scan(const MomentSequence& L, const SupportBox& box, unsigned resolution,
                         unsigned d, double mass_floor, const MassOptions& options) {
  if (resolution < 2) throw Error(ErrorKind::Validation, "grid resolution must be >= 2");
  const std::size_t m = L.num_vars();
  if (box.intervals.size() != m) {
    throw Error(ErrorKind::DimensionMismatch, "box dimension differs from the sequence");
  }
  for (std::size_t i = 0; i < m; ++i) {
    if (growth_profile(L, Polynomial::variable(m, i)).verdict == GrowthVerdict::Diverging) {
      throw Error(ErrorKind::GrowthDiverging, "GrowthDiverging(" + std::to_string(i) + ")");
    }
  }

  std::vector<std::vector<Rational>> axes(m);
  for (std::size_t i = 0; i < m; ++i) {
    const Rational lo = dyadic(box.intervals[i].first, 30);
    const Rational hi = dyadic(box.intervals[i].second, 30);
    for (unsigned k = 0; k < resolution; ++k) {
      Rational step(k, resolution - 1);
      step.canonicalize();
      axes[i].push_back(lo + (hi - lo) * step);
    }
  }
  std::size_t total = 1;
  for (std::size_t i = 0; i < m; ++i) total *= resolution;

  // Linear bumps only, no narrower than four node steps.
  MassOptions node_options = options;
  node_options.max_power = 1;
  for (std::size_t i = 0; i < m; ++i) {
    const double step = (box.intervals[i].second - box.intervals[i].first) / (resolution - 1);
    node_options.min_scale = std::max(node_options.min_scale, 4.0 * step);
  }

  auto unflatten = [&](std::size_t flat) {
    std::vector<unsigned> idx(m);
    for (std::size_t i = m; i-- > 0;) {
      idx[i] = static_cast<unsigned>(flat % resolution);
      flat /= resolution;
    }
    return idx;
  };

  std::vector<double> mass(total, 0.0);
  for (std::size_t flat = 0; flat < total; ++flat) {
    const auto idx = unflatten(flat);
    Point node(m);
    for (std::size_t i = 0; i < m; ++i) node[i] = axes[i][idx[i]];
    mass[flat] = atom_mass(L, node, d, node_options).value;
  }

  // Flood fill over the 3^m - 1 neighbours of each node.
  std::vector<int> label(total, -1);
  RecoveryResult result;
  result.method = RecoveryMethod::GridScan;
  for (std::size_t start = 0; start < total; ++start) {
    if (mass[start] < mass_floor || label[start] >= 0) continue;
    const int id = static_cast<int>(result.atoms.size());
    std::vector<double> center(m, 0.0);
    double weight_sum = 0.0;
    double peak = 0.0;
    std::deque<std::size_t> queue{start};
    label[start] = id;
    while (!queue.empty()) {
      const std::size_t cur = queue.front();
      queue.pop_front();
      const auto idx = unflatten(cur);
      for (std::size_t i = 0; i < m; ++i) center[i] += mass[cur] * to_double(axes[i][idx[i]]);
      weight_sum += mass[cur];
      peak = std::max(peak, mass[cur]);
      std::size_t offsets = 1;
      for (std::size_t i = 0; i < m; ++i) offsets *= 3;
      for (std::size_t o = 0; o < offsets; ++o) {
        std::size_t code = o;
        std::size_t neighbour = 0;
        bool valid = true;
        for (std::size_t i = 0; i < m; ++i) {
          const long delta = static_cast<long>(code % 3) - 1;
          code /= 3;
          const long pos = static_cast<long>(idx[i]) + delta;
          if (pos < 0 || pos >= static_cast<long>(resolution)) {
            valid = false;
            break;
          }
          neighbour = neighbour * resolution + static_cast<std::size_t>(pos);
        }
        if (!valid || label[neighbour] >= 0 || mass[neighbour] < mass_floor) continue;
        label[neighbour] = id;
        queue.push_back(neighbour);
      }
    }
    for (auto& c : center) c /= weight_sum;
    result.atoms.push_back({center, peak});
  }
  double sum = 0.0;
  for (const auto& a : result.atoms) sum += a.weight;
  if (!result.atoms.empty() && std::fabs(sum - 1.0) < 1e-6) {
    for (auto& a : result.atoms) a.weight /= sum;
  }
  result.residual =
      moment_residual(L, result.atoms, static_cast<unsigned>(2 * result.atoms.size()));
  return result;
}

bool compare(const AtomicMeasure& truth, const RecoveryResult& recovered, double loc_tol,
             double mass_tol) {
  const auto& atoms = truth.atoms();
  if (atoms.size() != recovered.atoms.size()) return false;
  const std::size_t n = atoms.size();
  auto close = [&](std::size_t i, std::size_t j) {
    const auto& r = recovered.atoms[j];
    if (r.point.size() != atoms[i].point.size()) return false;
    for (std::size_t k = 0; k < r.point.size(); ++k) {
      if (std::fabs(r.point[k] - to_double(atoms[i].point[k])) > loc_tol) return false;
    }
    return std::fabs(r.weight - to_double(atoms[i].weight)) <= mass_tol;
  };
  std::vector<bool> used(n, false);
  std::function<bool(std::size_t)> match = [&](std::size_t i) {
    if (i == n) return true;
    for (std::size_t j = 0; j < n; ++j) {
      if (used[j] || !close(i, j)) continue;
      used[j] = true;
      if (match(i + 1)) return true;
      used[j] = false;
    }
    return false;
  };
  return match(0);
}

}  // namespace momcert
