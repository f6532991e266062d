#pragma once

#include <vector>

#include "kmod/linalg.hpp"
#include "kmod/types.hpp"

namespace kmod {

// Element of the coefficient algebra: a compact operator on a Hilbert space,
// held at truncation level d as a d x d complex matrix.
struct CompactElement {
  ComplexMatrix matrix;

  explicit CompactElement(ComplexMatrix m);
  Index dim_h() const { return matrix.rows(); }
};

// Element of the Hilbert module over the compact operators: a d x m complex
// matrix x, with algebra-valued inner product <x,y> = x * y^*.
struct ModuleVector {
  ComplexMatrix matrix;

  explicit ModuleVector(ComplexMatrix m);
  Index dim_h() const { return matrix.rows(); }
  Index dim_m() const { return matrix.cols(); }
};

// Pairwise-orthogonal system of basic vectors together with the minimal
// projections <x_i, x_i>.
struct OrthonormalBasis {
  std::vector<ModuleVector> vectors;
  std::vector<CompactElement> projections;

  Index size() const { return static_cast<Index>(vectors.size()); }
};

// Image of a module vector in the localization at a minimal projection: the
// Hilbert space e0*E with inner product tr<.,.>, coordinatized over C^m.
struct LocalizedVector {
  CompactElement basepoint;
  ComplexVector coords;
};

// <x,y> = x * y^*. Linear in the first slot, <x,y>^* = <y,x>.
CompactElement inner_product(const ModuleVector& x, const ModuleVector& y);

// Left action a.x of the coefficient algebra.
ModuleVector module_action(const CompactElement& a, const ModuleVector& x);

// ||x|| = ||<x,x>||^{1/2}, the largest singular value of x.
double module_norm(const ModuleVector& x);

// True iff <x,x> is a rank-one projection (eigenvalues one 1, rest 0 within
// tol) and <x,x>.x = x within tol.
bool is_basic_vector(const ModuleVector& x, double tol = 1e-10);

// The standard orthonormal basis u e_j^T (u the first basis vector of C^d),
// j = 0..m-1.
OrthonormalBasis orthonormal_basis(Index d, Index m);

// Orthonormal basis of the closed submodule generated by vs, built by
// localizing and orthonormalizing coordinates in input order, then lifting.
// All-zero input yields an empty basis. Throws DimensionMismatch on
// inconsistent shapes.
OrthonormalBasis gram_schmidt_module(const std::vector<ModuleVector>& vs,
                                     double tol_rank = 0.0);

// Orthonormal dimension of the submodule generated by vs.
Index dim_K(const std::vector<ModuleVector>& vs, double tol_rank = 0.0);

// Localize x at the minimal projection e0. Throws NotMinimalProjection.
LocalizedVector localize(const CompactElement& e0, const ModuleVector& x,
                         double tol = 1e-10);

// Orthonormal basis of the orthogonal complement of the submodule generated
// by vs; together they decompose every module vector. The (d, m) overload
// fixes the ambient module, which the generator list alone cannot when empty.
OrthonormalBasis orthogonal_complement(Index d, Index m,
                                       const std::vector<ModuleVector>& vs,
                                       double tol_rank = 0.0);
OrthonormalBasis orthogonal_complement(const std::vector<ModuleVector>& vs,
                                       double tol_rank = 0.0);

// --- helpers shared with the operator layer ---

// Rank-one projection onto the `axis` coordinate of C^d.
CompactElement minimal_projection(Index d, Index axis = 0);

// Unit vector v with e0 = v v^*; deterministic phase (largest entry made real
// positive). Throws NotMinimalProjection if e0 is not a rank-one projection.
ComplexVector minimal_projection_vector(const CompactElement& e0, double tol = 1e-10);

// Coordinates of the submodule generated by vs: orthonormal columns spanning
// the row space of the stacked generators, in input order. The lift of column
// q is the basic vector u q^T.
ComplexMatrix submodule_coordinates(const std::vector<ModuleVector>& vs,
                                    double tol_rank = 0.0);

}  // namespace kmod
