#include "kmod/fredholm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace kmod {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct BlockFamily {
  std::vector<Index> levels;
  std::vector<ComplexMatrix> direct;   // analysis blocks, rows >= cols
  std::vector<ComplexMatrix> adjoint;  // same for the adjoint operator
  std::string path = "direct";
};

BlockFamily blocks_from_generator(const OperatorTower& t) {
  BlockFamily fam;
  fam.levels = t.levels;
  const Generator adj = t.generator.adjoint();
  for (Index n : t.levels) {
    fam.direct.push_back(t.generator.tall(n));
    fam.adjoint.push_back(adj.tall(n));
  }
  return fam;
}

BlockFamily blocks_from_matrices(const MatrixTower& t) {
  BlockFamily fam;
  fam.levels = t.levels;
  fam.path = "bounded_transform";
  for (size_t i = 0; i < t.matrices.size(); ++i) {
    const ComplexMatrix& m = t.matrices[i];
    if (m.rows() != m.cols()) {
      throw DimensionMismatch("matrix tower entries must be square");
    }
    const Index half = m.cols() / 2;
    fam.direct.push_back(m.leftCols(half));
    fam.adjoint.push_back(m.adjoint().leftCols(half));
  }
  return fam;
}

bool ratio_stable(const std::vector<double>& xs, double ratio) {
  double lo = kInf, hi = 0.0;
  bool any_finite = false;
  for (double x : xs) {
    if (std::isinf(x)) continue;
    any_finite = true;
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  if (!any_finite) return true;  // all vacuous
  // A mix of vacuous and finite gaps means the spectrum has not settled.
  for (double x : xs) {
    if (std::isinf(x)) return false;
  }
  if (lo <= 0.0) return false;
  return hi / lo <= ratio;
}

bool all_equal_idx(const std::vector<Index>& v) {
  for (size_t i = 1; i < v.size(); ++i) {
    if (v[i] != v[0]) return false;
  }
  return true;
}

FredholmReport analyze(const BlockFamily& fam, const AnalysisOptions& opt) {
  FredholmReport report;
  report.levels = fam.levels;
  report.tol_rank = opt.tol_rank;
  report.path = fam.path;

  // Decide whether singular-value thresholds are relative to the operator
  // norm: only when the norms themselves stabilize (bounded towers). Growing
  // norms signal an unbounded symbol, where absolute thresholds are the
  // meaningful ones.
  std::vector<double> norms;
  for (const auto& m : fam.direct) norms.push_back(operator_norm(m));
  double lo = kInf, hi = 0.0;
  for (double x : norms) {
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  report.normalized = hi > 0.0 && (lo > 0.0 && hi / lo <= opt.norm_stable_ratio);

  std::vector<Index> kers, cokers;
  std::vector<double> gaps;
  std::vector<Index> left_ranks, right_ranks;
  std::vector<double> g_norms;

  for (size_t i = 0; i < fam.direct.size(); ++i) {
    const ComplexMatrix& a = fam.direct[i];
    const ComplexMatrix& astar = fam.adjoint[i];
    const double tol = report.normalized ? opt.tol_rank * std::max(norms[i], 1e-300)
                                         : opt.tol_rank;

    const RankDecision rd = numerical_rank(a, tol);
    const RankDecision rs = numerical_rank(astar, tol);

    LevelStats stats;
    stats.level = fam.levels[i];
    stats.ker_dim = a.cols() - rd.rank;
    stats.coker_dim = astar.cols() - rs.rank;
    stats.sigma_gap = smallest_kept_sigma(rd);
    stats.norm = norms[i];
    report.per_level.push_back(stats);

    kers.push_back(stats.ker_dim);
    cokers.push_back(stats.coker_dim);
    gaps.push_back(stats.sigma_gap);

    // Pseudo-inverse corroboration: Moore-Penrose inverses of both blocks.
    // Their defects are orthogonal projections whose ranks are the kernel
    // dimensions; boundedness of the candidate inverse shows up as a stable
    // norm.
    const ComplexMatrix g = pseudo_inverse(a, tol);
    const ComplexMatrix gstar = pseudo_inverse(astar, tol);
    const ComplexMatrix left = g * a - ComplexMatrix::Identity(a.cols(), a.cols());
    const ComplexMatrix right =
        gstar * astar - ComplexMatrix::Identity(astar.cols(), astar.cols());
    const RankDecision l = numerical_rank(left, 0.5);
    const RankDecision r = numerical_rank(right, 0.5);
    left_ranks.push_back(l.rank);
    right_ranks.push_back(r.rank);
    g_norms.push_back(std::max(operator_norm(g), operator_norm(gstar)));
    if (i + 1 == fam.direct.size()) {
      report.pseudo_inverse.left_rank = l.rank;
      report.pseudo_inverse.right_rank = r.rank;
      report.pseudo_inverse.left_residual =
          l.rank < l.sigma.size() ? l.sigma(l.rank) : 0.0;
      report.pseudo_inverse.right_residual =
          r.rank < r.sigma.size() ? r.sigma(r.rank) : 0.0;
    }
  }

  const bool dims_stable = all_equal_idx(kers) && all_equal_idx(cokers);
  const bool sigma_stable = ratio_stable(gaps, opt.sigma_stable_ratio);

  report.ker_dim = kers.back();
  report.coker_dim = cokers.back();
  report.sigma_gap = gaps.back();
  report.closed_range = sigma_stable;
  report.is_fredholm = report.closed_range && dims_stable;
  report.index = static_cast<long>(report.ker_dim) - static_cast<long>(report.coker_dim);

  report.pseudo_inverse.g_norms = g_norms;
  const bool pinv_ranks_stable =
      all_equal_idx(left_ranks) && all_equal_idx(right_ranks);
  const bool pinv_norm_stable = ratio_stable(g_norms, opt.sigma_stable_ratio);
  report.pseudo_inverse.stable = pinv_ranks_stable && pinv_norm_stable;
  report.pseudo_inverse_residuals = {report.pseudo_inverse.left_residual,
                                     report.pseudo_inverse.right_residual};

  report.stabilized = dims_stable && sigma_stable && report.pseudo_inverse.stable;
  return report;
}

}  // namespace

Index kernel_dim_K(const AdjointableOp& t, double tol_rank) {
  return t.m - numerical_rank(t.psi_matrix(), tol_rank).rank;
}

Index kernel_dim_K(const OperatorTower& t, Index level, double tol_rank) {
  const ComplexMatrix block = t.generator.tall(level);
  return block.cols() - numerical_rank(block, tol_rank).rank;
}

FredholmReport fredholm_check_bounded(const AdjointableOp& t, double tol_rank) {
  BlockFamily fam;
  fam.levels = {t.m};
  fam.direct.push_back(t.psi_matrix());
  fam.adjoint.push_back(t.psi_matrix().adjoint());
  AnalysisOptions opt;
  opt.tol_rank = tol_rank > 0.0 ? tol_rank : numerical_rank(t.psi_matrix()).tol_used;
  if (opt.tol_rank == 0.0) opt.tol_rank = 1e-14;
  return analyze(fam, opt);
}

FredholmReport fredholm_check_bounded(const OperatorTower& t, AnalysisOptions opt) {
  return analyze(blocks_from_generator(t), opt);
}

FredholmReport fredholm_check_bounded(const MatrixTower& t, AnalysisOptions opt) {
  if (t.levels.size() != t.matrices.size()) {
    throw DimensionMismatch("matrix tower: levels and matrices differ in length");
  }
  return analyze(blocks_from_matrices(t), opt);
}

RegularFredholmReport fredholm_check_regular(const OperatorTower& t,
                                             AnalysisOptions opt) {
  RegularFredholmReport out;
  out.direct = fredholm_check_bounded(t, opt);

  MatrixTower ft;
  ft.levels = t.levels;
  const BoundedTransformResult bt = bounded_transform(t);
  for (const auto& lvl : bt.levels) ft.matrices.push_back(lvl.f);
  out.transform = fredholm_check_bounded(ft, opt);

  out.verdict_agree = out.direct.is_fredholm == out.transform.is_fredholm;
  out.index_agree =
      !out.direct.is_fredholm || out.direct.index == out.transform.index;

  const FredholmReport& headline = t.unbounded_flag ? out.transform : out.direct;
  out.is_fredholm = headline.is_fredholm;
  out.index = headline.index;
  return out;
}

long index_of(const FredholmReport& report) {
  if (!report.is_fredholm) {
    throw NotFredholm("index requested for an operator that is not Fredholm");
  }
  return report.index;
}

long index_of(const RegularFredholmReport& report) {
  if (!report.is_fredholm) {
    throw NotFredholm("index requested for an operator that is not Fredholm");
  }
  return report.index;
}

CompactPlusInvertible compact_plus_invertible(const OperatorTower& t,
                                              AnalysisOptions opt) {
  const RegularFredholmReport check = fredholm_check_regular(t, opt);
  if (!check.is_fredholm) {
    throw NotFredholm("decomposition requires a Fredholm tower");
  }
  if (check.index != 0) {
    std::ostringstream os;
    os << "decomposition requires index 0, got " << check.index;
    throw IndexNonzero(os.str());
  }

  CompactPlusInvertible out;
  std::vector<Index> ranks;
  for (Index n : t.levels) {
    const ComplexMatrix a = t.generator.square(n);
    const double norm = operator_norm(a);
    const double tol = check.direct.normalized ? opt.tol_rank * std::max(norm, 1e-300)
                                               : opt.tol_rank;
    SvdResult s = svd(a);
    DecompositionLevel lvl;
    lvl.level = n;
    // Replace the near-null singular directions by unit ones; what is added
    // is exactly the finite-rank part.
    RealVector patched = s.sigma;
    Index patched_count = 0;
    for (Index k = 0; k < patched.size(); ++k) {
      if (patched(k) <= tol) {
        patched(k) = 1.0;
        ++patched_count;
      }
    }
    lvl.v = s.u * patched.asDiagonal() * s.v.adjoint();
    lvl.k = a - lvl.v;
    lvl.v_min_sigma = patched.size() > 0 ? patched.minCoeff() : 1.0;
    lvl.k_rank = patched_count;
    lvl.reconstruction_residual = (lvl.v + lvl.k - a).norm() / (1.0 + a.norm());
    ranks.push_back(lvl.k_rank);
    out.levels.push_back(std::move(lvl));
  }
  out.k_rank_stable = all_equal_idx(ranks);
  return out;
}

}  // namespace kmod
