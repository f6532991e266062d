#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kmod/bounded_ops.hpp"

namespace kmod {

// Scalar weight symbol w(n) on the nonnegative integers. The language is
// real-coefficient polynomials, sqrt(n), and reciprocals of polynomials
// (needed for decaying diagonals such as 1/(n+1)).
class Symbol {
 public:
  enum class Kind { Polynomial, SqrtN, ReciprocalPolynomial };

  static Symbol parse(const std::string& text);
  static Symbol constant(double c);
  static Symbol polynomial(std::vector<double> coeffs);  // c0 + c1 n + ...
  static Symbol sqrt_n();
  static Symbol reciprocal(std::vector<double> coeffs);  // 1 / p(n)

  double operator()(Index n) const;
  bool unbounded() const;
  std::string to_string() const;
  Kind kind() const { return kind_; }

 private:
  Symbol(Kind k, std::vector<double> c) : kind_(k), coeffs_(std::move(c)) {}
  Kind kind_ = Kind::Polynomial;
  std::vector<double> coeffs_;
};

// Description of one consistent family of finite compressions of a banded
// operator on the infinite-multiplicity module. A generator can produce the
// exact [0,rows) x [0,cols) block of its infinite coordinate matrix, which
// is what keeps truncations of sums, products and adjoints consistent.
//
// Conventions: a weighted shift with step k maps coordinate n to
// w(n+k) * (n+k) for k > 0, i.e. the weight is indexed by the larger of the
// two coordinates it couples. The adjoint of a shift is then the shift with
// negated step and the same symbol.
class Generator {
 public:
  enum class Kind { WeightedShift, Diagonal, FiniteRank, Sum, Product };

  static Generator weighted_shift(int step, Symbol w);
  static Generator weighted_shift(int step, std::vector<double> weights);
  static Generator diagonal(Symbol g);
  static Generator diagonal(std::vector<double> values);
  static Generator finite_rank(ComplexMatrix block);
  static Generator sum(std::vector<Generator> terms);
  static Generator product(std::vector<Generator> terms);  // left-to-right composition

  Generator adjoint() const;

  // Exact block of the infinite coordinate matrix.
  ComplexMatrix block(Index rows, Index cols) const;
  ComplexMatrix square(Index n) const { return block(n, n); }
  // Columns 0..n-1 with every row they can reach: the truncation whose
  // kernel is the genuine compactly-supported kernel.
  ComplexMatrix tall(Index n) const { return block(n + band_upper(), n); }

  // Persistent band bounds (finite-rank parts excluded: their support is
  // bounded, so they do not widen the band at infinity).
  Index band_upper() const;
  Index band_lower() const;
  // Smallest r such that rows >= r vanish on columns < cols.
  Index row_extent(Index cols) const;

  bool unbounded() const;
  Kind kind() const { return kind_; }
  int step() const { return step_; }
  const std::optional<Symbol>& symbol() const { return symbol_; }
  const std::optional<std::vector<double>>& weight_list() const { return weights_; }
  const ComplexMatrix& finite_block() const { return block_; }
  const std::vector<Generator>& terms() const { return terms_; }

 private:
  Generator() = default;
  double weight_at(Index n) const;

  Kind kind_ = Kind::Diagonal;
  int step_ = 0;
  std::optional<Symbol> symbol_;
  std::optional<std::vector<double>> weights_;
  ComplexMatrix block_;
  std::vector<Generator> terms_;
};

// A generator together with the truncation levels at which to study it and
// the coefficient-algebra truncation used when materializing module vectors.
struct OperatorTower {
  Generator generator;
  std::vector<Index> levels;  // strictly increasing; default {16, 32}
  Index dim_h = 2;
  bool unbounded_flag = false;

  OperatorTower(Generator g, std::vector<Index> lv = {16, 32}, Index d = 2);

  AdjointableOp instantiate(Index level) const;
};

OperatorTower adjoint_tower(const OperatorTower& t);

// Level-wise surrogate of regularity: 1 + T*T must be uniformly positive
// (its smallest eigenvalue can never drop below 1 up to roundoff).
struct RegularityLevel {
  Index level = 0;
  double min_eig = 0.0;
};

struct RegularityReport {
  std::vector<RegularityLevel> levels;
  bool regular_surrogate = false;
  double tol = 0.0;
};

RegularityReport check_regularity(const OperatorTower& t, double tol = 1e-10);

// Bounded transform F = T (1 + T*T)^{-1/2} and Q = (1 + T*T)^{-1/2} at each
// level, with the contract diagnostics recorded.
struct BoundedTransformLevel {
  Index level = 0;
  ComplexMatrix f;  // localized (coordinate) matrix
  ComplexMatrix q;
  double f_norm = 0.0;
  double defect_min_eig = 0.0;      // min eig of 1 - F*F
  double q_square_residual = 0.0;   // || Q^2 - (1 - F*F) ||_F relative
};

struct BoundedTransformResult {
  std::vector<BoundedTransformLevel> levels;
  double norm_f = 0.0;  // max over levels

  AdjointableOp f_op(size_t i, Index d = 2) const;
  AdjointableOp q_op(size_t i, Index d = 2) const;
};

BoundedTransformResult bounded_transform(const OperatorTower& t);

// Single-level transform of a localized matrix.
ComplexMatrix bounded_transform_matrix(const ComplexMatrix& a);

// t = F (1 - F*F)^{-1/2}; throws DefectSingular when the defect's smallest
// eigenvalue is <= tol (no operator at this level has transform F).
ComplexMatrix inverse_transform_matrix(const ComplexMatrix& f, double tol = 1e-8);
AdjointableOp inverse_transform(const AdjointableOp& f, double tol = 1e-8);

// Mutual containment between two subspaces given by orthonormal bases.
struct SubspacePairCheck {
  Index dim_a = 0;
  Index dim_b = 0;
  double residual = 0.0;  // max of the two containment defects
};

// Kernel/range identities tying an operator to its bounded transform,
// verified per level, plus the stable kernel dimensions across levels.
struct Lemma42Level {
  Index level = 0;
  SubspacePairCheck ran_t_vs_ran_f;
  SubspacePairCheck ran_tstar_vs_ran_fstar;
  SubspacePairCheck ker_tstar_vs_ran_t_perp;
  SubspacePairCheck ker_t_vs_ran_tstar_perp;
  SubspacePairCheck ker_t_vs_ker_f;
  SubspacePairCheck ker_tstar_vs_ker_fstar;
  Index stable_ker_t = 0;      // genuine kernel dim of T at this level
  Index stable_ker_tstar = 0;  // genuine kernel dim of T*
  Index stable_ker_f = 0;      // same, read from the transform
  Index stable_ker_fstar = 0;
};

struct Lemma42Report {
  std::vector<Lemma42Level> levels;
  double max_residual = 0.0;
  bool dims_stable = false;   // stable dims agree across levels
  bool dims_match = false;    // T-side and F-side stable dims agree
};

Lemma42Report verify_lemma_4_2(const OperatorTower& t, double tol_rank = 1e-8);

// Moore-Penrose pseudo-inverses per level, with the two mod-finite-rank
// defects of a pseudo two-sided inverse. Left defect is G T - 1; the right
// defect is obtained through the adjoint route, so its rank equals the
// cokernel dimension.
struct PseudoInverseLevel {
  Index level = 0;
  ComplexMatrix g;  // cols(tall) x rows(tall)
  Index left_rank = 0;
  Index right_rank = 0;
  double left_excess = 0.0;   // first singular value beyond the defect rank
  double right_excess = 0.0;
  double g_norm = 0.0;
};

struct PseudoInverseResult {
  std::vector<PseudoInverseLevel> levels;
  bool ranks_stable = false;
  bool norm_stable = false;
};

// Throws NoPseudoInverse when defect ranks or ||G|| fail to stabilize
// across levels (no bounded pseudo-inverse exists in the limit).
PseudoInverseResult pseudo_inverse_regular(const OperatorTower& t,
                                           double tol_rank = 1e-8);

}  // namespace kmod
