#pragma once

#include <functional>

#include "kmod/types.hpp"

namespace kmod {

// Relative tolerance for the Hermitian symmetry check.
inline constexpr double kDefaultHermTol = 1e-10;

struct EigResult {
  RealVector eigenvalues;  // ascending
  ComplexMatrix vectors;   // unitary, columns are eigenvectors
};

struct SvdResult {
  ComplexMatrix u;
  RealVector sigma;  // nonincreasing, >= 0
  ComplexMatrix v;   // full, so trailing columns span the null space
};

// Outcome of a numerical rank decision at an explicit tolerance.
struct RankDecision {
  Index rank = 0;
  RealVector sigma;
  double tol_used = 0.0;
  // sigma[rank-1] / sigma[rank]; +inf when the cut is exact or vacuous.
  double gap_ratio = 0.0;
};

// Eigendecomposition of a Hermitian matrix. Throws NotHermitian if
// ||m - m*||_F > tol_herm * ||m||_F, DimensionMismatch if not square.
EigResult hermitian_eig(const ComplexMatrix& m, double tol_herm = kDefaultHermTol);

// Full singular value decomposition m = u * diag(sigma) * v^*.
SvdResult svd(const ComplexMatrix& m);

// Functional calculus u * diag(f(lambda)) * u^* through the eigendecomposition.
// `domain` (when given) must accept every eigenvalue, else DomainError.
ComplexMatrix hermitian_function(const ComplexMatrix& m,
                                 const std::function<double(double)>& f,
                                 const std::function<bool(double)>& domain = {},
                                 double tol_herm = kDefaultHermTol);

// Rank at tolerance tol_rank; tol_rank = 0 selects the standard default
// max(rows, cols) * eps * sigma_max.
RankDecision numerical_rank(const ComplexMatrix& m, double tol_rank = 0.0);

// Orthonormal basis of the numerical null space (cols - rank columns).
ComplexMatrix kernel_basis(const ComplexMatrix& m, double tol_rank = 0.0);

// Moore-Penrose inverse with singular values below the rank tolerance dropped.
ComplexMatrix pseudo_inverse(const ComplexMatrix& m, double tol_rank = 0.0);

// Largest singular value (0 for an empty matrix).
double operator_norm(const ComplexMatrix& m);

// Orthonormal columns spanning the column space (rank at tol_rank).
ComplexMatrix range_basis(const ComplexMatrix& m, double tol_rank = 0.0);

// ||(I - B B^*) A||_2 for orthonormal-column A, B: how far A sticks out of
// span(B). 0 when A is empty, 1-ish when B misses A entirely.
double subspace_containment(const ComplexMatrix& a, const ComplexMatrix& b);

// max of the two containment residuals.
double subspace_mutual_residual(const ComplexMatrix& a, const ComplexMatrix& b);

// Smallest singular value above the rank cut; +inf when rank is 0.
double smallest_kept_sigma(const RankDecision& d);

// ||a - b||_F / (1 + ||a||_F), the relative residual used throughout.
double relative_residual(const ComplexMatrix& a, const ComplexMatrix& b);

}  // namespace kmod
