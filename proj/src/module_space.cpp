#include "kmod/module_space.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace kmod {

namespace {

void require_same_shape(const ModuleVector& x, const ModuleVector& y, const char* op) {
  if (x.dim_h() != y.dim_h() || x.dim_m() != y.dim_m()) {
    std::ostringstream os;
    os << op << ": shapes (" << x.dim_h() << "x" << x.dim_m() << ") and ("
       << y.dim_h() << "x" << y.dim_m() << ") differ";
    throw DimensionMismatch(os.str());
  }
}

// Default relative threshold for dependence decisions in orthonormalization.
constexpr double kGramSchmidtTol = 1e-8;

}  // namespace

CompactElement::CompactElement(ComplexMatrix m) : matrix(std::move(m)) {
  ensure_finite(matrix, "CompactElement");
  if (matrix.rows() < 1 || matrix.rows() != matrix.cols()) {
    throw DimensionMismatch("CompactElement: matrix must be square and nonempty");
  }
}

ModuleVector::ModuleVector(ComplexMatrix m) : matrix(std::move(m)) {
  ensure_finite(matrix, "ModuleVector");
  if (matrix.rows() < 1 || matrix.cols() < 1) {
    throw DimensionMismatch("ModuleVector: dimensions must be at least 1");
  }
}

CompactElement inner_product(const ModuleVector& x, const ModuleVector& y) {
  require_same_shape(x, y, "inner_product");
  return CompactElement(x.matrix * y.matrix.adjoint());
}

ModuleVector module_action(const CompactElement& a, const ModuleVector& x) {
  if (a.dim_h() != x.dim_h()) {
    throw DimensionMismatch("module_action: algebra and module truncations differ");
  }
  return ModuleVector(a.matrix * x.matrix);
}

double module_norm(const ModuleVector& x) { return operator_norm(x.matrix); }

bool is_basic_vector(const ModuleVector& x, double tol) {
  const ComplexMatrix gram = x.matrix * x.matrix.adjoint();
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(gram);
  const RealVector& ev = es.eigenvalues();  // ascending
  const Index n = ev.size();
  if (std::abs(ev(n - 1) - 1.0) > tol) return false;
  for (Index i = 0; i + 1 < n; ++i) {
    if (std::abs(ev(i)) > tol) return false;
  }
  // A basic vector is fixed by its own Gram projection.
  const ComplexMatrix fixed = gram * x.matrix;
  return (fixed - x.matrix).norm() <= tol * std::max(1.0, x.matrix.norm());
}

OrthonormalBasis orthonormal_basis(Index d, Index m) {
  if (d < 1 || m < 1) {
    throw DimensionMismatch("orthonormal_basis: d and m must be at least 1");
  }
  OrthonormalBasis basis;
  for (Index j = 0; j < m; ++j) {
    ComplexMatrix v = ComplexMatrix::Zero(d, m);
    v(0, j) = 1.0;
    basis.vectors.emplace_back(std::move(v));
    basis.projections.push_back(minimal_projection(d));
  }
  return basis;
}

ComplexMatrix submodule_coordinates(const std::vector<ModuleVector>& vs,
                                    double tol_rank) {
  if (vs.empty()) return ComplexMatrix(0, 0);
  const Index d = vs.front().dim_h();
  const Index m = vs.front().dim_m();
  for (const auto& v : vs) {
    if (v.dim_h() != d || v.dim_m() != m) {
      throw DimensionMismatch("submodule generators have mixed shapes");
    }
  }
  const double tol = tol_rank > 0.0 ? tol_rank : kGramSchmidtTol;

  // The submodule generated by vs consists of all matrices whose rows lie in
  // the joint row space of the generators, so orthonormalize the rows.
  // Modified Gram-Schmidt in input order with one re-orthogonalization pass.
  std::vector<ComplexVector> q;
  for (const auto& v : vs) {
    for (Index r = 0; r < d; ++r) {
      ComplexVector c = v.matrix.row(r).transpose();
      const double original = c.norm();
      if (original <= tol) continue;
      for (int pass = 0; pass < 2; ++pass) {
        for (const auto& qi : q) {
          c -= (qi.adjoint() * c)(0) * qi;
        }
      }
      if (c.norm() > tol * original) {
        q.push_back(c / c.norm());
      }
    }
  }
  ComplexMatrix out(m, static_cast<Index>(q.size()));
  for (Index j = 0; j < out.cols(); ++j) out.col(j) = q[j];
  return out;
}

namespace {

OrthonormalBasis lift_coordinates(const ComplexMatrix& q, Index d) {
  OrthonormalBasis basis;
  const Index m = q.rows();
  for (Index j = 0; j < q.cols(); ++j) {
    ComplexMatrix v = ComplexMatrix::Zero(d, m);
    v.row(0) = q.col(j).transpose();
    basis.vectors.emplace_back(std::move(v));
    basis.projections.push_back(minimal_projection(d));
  }
  return basis;
}

}  // namespace

OrthonormalBasis gram_schmidt_module(const std::vector<ModuleVector>& vs,
                                     double tol_rank) {
  if (vs.empty()) return OrthonormalBasis{};
  return lift_coordinates(submodule_coordinates(vs, tol_rank), vs.front().dim_h());
}

Index dim_K(const std::vector<ModuleVector>& vs, double tol_rank) {
  if (vs.empty()) return 0;
  return submodule_coordinates(vs, tol_rank).cols();
}

CompactElement minimal_projection(Index d, Index axis) {
  ComplexMatrix e = ComplexMatrix::Zero(d, d);
  e(axis, axis) = 1.0;
  return CompactElement(std::move(e));
}

ComplexVector minimal_projection_vector(const CompactElement& e0, double tol) {
  const ComplexMatrix& e = e0.matrix;
  if ((e - e.adjoint()).norm() > tol * std::max(1.0, e.norm())) {
    throw NotMinimalProjection("basepoint is not Hermitian");
  }
  if ((e * e - e).norm() > tol * std::max(1.0, e.norm())) {
    throw NotMinimalProjection("basepoint is not idempotent");
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (e + e.adjoint()));
  const RealVector& ev = es.eigenvalues();
  const Index n = ev.size();
  if (std::abs(ev(n - 1) - 1.0) > tol) {
    throw NotMinimalProjection("basepoint has no unit eigenvalue");
  }
  if (n > 1 && std::abs(ev(n - 2)) > tol) {
    throw NotMinimalProjection("basepoint has rank greater than one");
  }
  ComplexVector v = es.eigenvectors().col(n - 1);
  // Deterministic phase: rotate the largest-magnitude entry onto the
  // positive real axis.
  Index imax = 0;
  v.cwiseAbs().maxCoeff(&imax);
  const Complex pivot = v(imax);
  if (std::abs(pivot) > 0) v *= std::conj(pivot) / std::abs(pivot);
  return v;
}

LocalizedVector localize(const CompactElement& e0, const ModuleVector& x, double tol) {
  if (e0.dim_h() != x.dim_h()) {
    throw DimensionMismatch("localize: basepoint and vector truncations differ");
  }
  const ComplexVector v = minimal_projection_vector(e0, tol);
  return LocalizedVector{e0, (v.adjoint() * x.matrix).transpose()};
}

OrthonormalBasis orthogonal_complement(Index d, Index m,
                                       const std::vector<ModuleVector>& vs,
                                       double tol_rank) {
  for (const auto& v : vs) {
    if (v.dim_h() != d || v.dim_m() != m) {
      throw DimensionMismatch("orthogonal_complement: generator shape mismatch");
    }
  }
  const ComplexMatrix q = submodule_coordinates(vs, tol_rank);
  ComplexMatrix comp;
  if (q.cols() == 0) {
    comp = ComplexMatrix::Identity(m, m);
  } else {
    comp = kernel_basis(q.adjoint(), tol_rank);
  }
  return lift_coordinates(comp, d);
}

OrthonormalBasis orthogonal_complement(const std::vector<ModuleVector>& vs,
                                       double tol_rank) {
  if (vs.empty()) {
    throw DimensionMismatch(
        "orthogonal_complement: empty input needs explicit ambient dimensions");
  }
  return orthogonal_complement(vs.front().dim_h(), vs.front().dim_m(), vs, tol_rank);
}

}  // namespace kmod
