#pragma once

#include <string>
#include <utility>
#include <vector>

#include "kmod/regular_ops.hpp"

namespace kmod {

// Knobs for the tower-level stabilization rules. A quantity is "stable" when
// it agrees across the checked levels (dimensions exactly, norms and gaps up
// to the stated ratios).
struct AnalysisOptions {
  double tol_rank = 1e-8;
  double norm_stable_ratio = 1.25;   // operator norms: normalize iff stable
  double sigma_stable_ratio = 1.5;   // spectral gap drift that still counts as stable
};

struct LevelStats {
  Index level = 0;
  Index ker_dim = 0;
  Index coker_dim = 0;
  double sigma_gap = 0.0;  // smallest retained singular value at this level
  double norm = 0.0;
};

struct PseudoInverseSummary {
  Index left_rank = 0;
  Index right_rank = 0;
  double left_residual = 0.0;   // singular mass beyond the defect rank
  double right_residual = 0.0;
  std::vector<double> g_norms;
  bool stable = false;  // the pseudo-inverse route's Fredholm verdict
};

// Verdict record for one operator or tower. index is meaningful only when
// is_fredholm holds; finiteness of kernel dimensions is certified by
// stabilization across the checked levels.
struct FredholmReport {
  bool is_fredholm = false;
  Index ker_dim = 0;
  Index coker_dim = 0;
  long index = 0;
  bool closed_range = false;
  double sigma_gap = 0.0;
  std::vector<Index> levels;
  bool stabilized = false;
  double tol_rank = 0.0;
  std::pair<double, double> pseudo_inverse_residuals{0.0, 0.0};
  PseudoInverseSummary pseudo_inverse;
  std::vector<LevelStats> per_level;
  bool normalized = false;           // whether sigma thresholds were norm-relative
  std::string path = "direct";       // "direct" or "bounded_transform"
};

// A family of square matrices indexed by level, e.g. the bounded transforms
// of a tower. Kernel statistics are read from half-width column restrictions.
struct MatrixTower {
  std::vector<Index> levels;
  std::vector<ComplexMatrix> matrices;
};

// dim_K of the kernel: for a fixed operator the nullity of its localization.
Index kernel_dim_K(const AdjointableOp& t, double tol_rank = 0.0);
// For a tower at one level: nullity of the tall block (boundary-artifact free).
Index kernel_dim_K(const OperatorTower& t, Index level, double tol_rank = 1e-8);

// Atkinson-style check for a fixed operator on a finite-multiplicity module.
FredholmReport fredholm_check_bounded(const AdjointableOp& t, double tol_rank = 0.0);
// Direct path on a generator tower (exact rectangular truncations).
FredholmReport fredholm_check_bounded(const OperatorTower& t, AnalysisOptions opt = {});
// Tower given only through square matrices per level.
FredholmReport fredholm_check_bounded(const MatrixTower& t, AnalysisOptions opt = {});

// Both routes for a regular tower: the direct compressions and the bounded
// transform. Disagreements are surfaced, never reconciled.
struct RegularFredholmReport {
  FredholmReport direct;
  FredholmReport transform;
  bool verdict_agree = false;
  bool index_agree = false;  // vacuously true when not Fredholm
  bool is_fredholm = false;  // headline: transform path for unbounded towers
  long index = 0;
};

RegularFredholmReport fredholm_check_regular(const OperatorTower& t,
                                             AnalysisOptions opt = {});

// ind = dim_K Ker - dim_K Ker of the adjoint. Throws NotFredholm.
long index_of(const FredholmReport& report);
long index_of(const RegularFredholmReport& report);

// Splitting of an index-zero Fredholm tower into invertible plus finite rank.
struct DecompositionLevel {
  Index level = 0;
  ComplexMatrix v;  // invertible part (localized matrices)
  ComplexMatrix k;  // finite-rank part
  double v_min_sigma = 0.0;
  Index k_rank = 0;
  double reconstruction_residual = 0.0;
};

struct CompactPlusInvertible {
  std::vector<DecompositionLevel> levels;
  bool k_rank_stable = false;
};

// Throws NotFredholm / IndexNonzero when the precondition fails.
CompactPlusInvertible compact_plus_invertible(const OperatorTower& t,
                                              AnalysisOptions opt = {});

}  // namespace kmod
