#pragma once

#include <utility>
#include <vector>

#include "kmod/module_space.hpp"

namespace kmod {

// Adjointable operator on the module of d x m matrices. Every bounded
// module-linear map on this module commutes with the left algebra action and
// is therefore right multiplication by a fixed m x m matrix, which is stored.
// The adjoint is the conjugate transpose of the multiplier, so adjointability
// is structural rather than checked.
struct AdjointableOp {
  Index d = 1;
  Index m = 1;
  ComplexMatrix right_mult;  // m x m

  AdjointableOp(Index d_, ComplexMatrix r);

  // Matrix of the localized operator on C^m in the canonical coordinates;
  // independent of the chosen minimal projection.
  ComplexMatrix psi_matrix() const { return right_mult.transpose(); }

  static AdjointableOp identity(Index d, Index m);
  static AdjointableOp zero(Index d, Index m);
  // Operator whose localized matrix is phi.
  static AdjointableOp from_psi(Index d, const ComplexMatrix& phi);
};

// T(x) = x * R; module-linear by construction.
ModuleVector apply(const AdjointableOp& t, const ModuleVector& x);

// <Tx, y> = <x, T*y>.
AdjointableOp adjoint(const AdjointableOp& t);

// (t . s)(x) = t(s(x)).
AdjointableOp compose(const AdjointableOp& t, const AdjointableOp& s);

AdjointableOp add(const AdjointableOp& t, const AdjointableOp& s);
AdjointableOp scale(Complex c, const AdjointableOp& t);

// Operator norm via the Gram route sqrt(lambda_max(R R^*)).
double op_norm(const AdjointableOp& t);

// Rank-one module operator z -> <z, x> y.
AdjointableOp theta(const ModuleVector& x, const ModuleVector& y);

// Evidence that an operator lies in the span of the rank-one operators: a
// list of pairs whose theta-sum reproduces it within `residual`.
struct ThetaSpanCertificate {
  std::vector<std::pair<ModuleVector, ModuleVector>> pairs;
  std::vector<Complex> coefficients;
  double residual = 0.0;
};

// At fixed truncation every operator is a finite theta-sum; the certificate
// uses one pair per retained singular direction of the multiplier.
ThetaSpanCertificate theta_span_membership(const AdjointableOp& t, double tol = 1e-12);

// Localization isomorphism at the minimal projection e0, computed by
// evaluating t on the lifted standard basis of e0*E and reading coordinates.
ComplexMatrix psi(const AdjointableOp& t, const CompactElement& e0, double tol = 1e-10);

// Inverse of the localization: the operator on the d-truncated module whose
// localized matrix is s. Throws NotMinimalProjection / DimensionMismatch.
AdjointableOp psi_inverse(const ComplexMatrix& s, const CompactElement& e0,
                          double tol = 1e-10);

// Mutual-containment residuals for Ker psi(T) = e Ker T and
// Ran psi(T) = e Ran T, each computed through two independent routes.
struct TransferResidual {
  double kernel = 0.0;
  double range = 0.0;
};

TransferResidual kernel_range_transfer(const AdjointableOp& t, const CompactElement& e,
                                       double tol_rank = 0.0);

struct BoundedBelowResult {
  bool bounded_below = false;
  double bound = 0.0;  // +inf when the restricted domain is empty
};

// Smallest singular value of t, optionally restricted to the orthogonal
// complement of its numerical kernel (the closed-range diagnostic).
BoundedBelowResult is_bounded_below(const AdjointableOp& t,
                                    bool restrict_to_ker_perp = true,
                                    double tol = 0.0);

}  // namespace kmod
