#pragma once

#include <vector>

#include "momcert/moments.hpp"
#include "momcert/support.hpp"

namespace momcert {

struct RecoveredAtom {
  std::vector<double> point;
  double weight = 0.0;
};

enum class RecoveryMethod { Prony1D, GridScan };
const char* to_string(RecoveryMethod m);

struct RecoveryResult {
  std::vector<RecoveredAtom> atoms;
  double residual = 0.0;  // max |moment mismatch| up to degree 2N
  RecoveryMethod method = RecoveryMethod::Prony1D;
};

/// Hankel kernel recovery of a finitely atomic 1-D measure. Throws
/// RankUnstable when the moment-matrix ranks never go flat and
/// IllConditioned when roots cluster or weights come out nonpositive.
RecoveryResult prony_recover(const MomentSequence& L);

/// Evaluates atom_mass on a resolution^m grid over the box and merges
/// adjacent nodes with mass >= mass_floor. Cluster center: mass-weighted node
/// average; cluster mass: the largest node estimate in the cluster.
RecoveryResult grid_scan(const MomentSequence& L, const SupportBox& box, unsigned resolution,
                         unsigned d, double mass_floor, const MassOptions& options = {});

/// True iff a bijection pairs every true atom with a recovered one within
/// loc_tol (max-norm) and mass_tol.
bool compare(const AtomicMeasure& truth, const RecoveryResult& recovered, double loc_tol,
             double mass_tol);

/// Max |sum_j w_j x_j^g - L(X^g)| over |g| <= max_total.
double moment_residual(const MomentSequence& L, const std::vector<RecoveredAtom>& atoms,
                       unsigned max_total);

}  // namespace momcert
