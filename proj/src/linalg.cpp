#include "kmod/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <cmath>
#include <limits>
#include <sstream>

namespace kmod {

void ensure_finite(const ComplexMatrix& m, const char* what) {
  if (!m.allFinite()) {
    std::ostringstream os;
    os << what << ": matrix contains NaN or Inf entries";
    throw std::invalid_argument(os.str());
  }
}

EigResult hermitian_eig(const ComplexMatrix& m, double tol_herm) {
  ensure_finite(m, "hermitian_eig");
  if (m.rows() != m.cols()) {
    throw DimensionMismatch("hermitian_eig: matrix is not square");
  }
  const double scale = m.norm();
  const double defect = (m - m.adjoint()).norm();
  if (defect > tol_herm * std::max(scale, 1e-300)) {
    std::ostringstream os;
    os << "hermitian_eig: symmetry defect " << defect << " exceeds " << tol_herm
       << " * " << scale;
    throw NotHermitian(os.str());
  }
  // Symmetrize before decomposing so tiny asymmetries cannot leak through.
  const ComplexMatrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("hermitian_eig: eigendecomposition failed");
  }
  return EigResult{es.eigenvalues(), es.eigenvectors()};
}

SvdResult svd(const ComplexMatrix& m) {
  ensure_finite(m, "svd");
  Eigen::JacobiSVD<ComplexMatrix> dec(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return SvdResult{dec.matrixU(), dec.singularValues(), dec.matrixV()};
}

ComplexMatrix hermitian_function(const ComplexMatrix& m,
                                 const std::function<double(double)>& f,
                                 const std::function<bool(double)>& domain,
                                 double tol_herm) {
  EigResult e = hermitian_eig(m, tol_herm);
  RealVector mapped(e.eigenvalues.size());
  for (Index i = 0; i < e.eigenvalues.size(); ++i) {
    const double lambda = e.eigenvalues(i);
    if (domain && !domain(lambda)) {
      std::ostringstream os;
      os << "hermitian_function: eigenvalue " << lambda
         << " lies outside the declared domain";
      throw DomainError(os.str());
    }
    mapped(i) = f(lambda);
  }
  return e.vectors * mapped.asDiagonal() * e.vectors.adjoint();
}

RankDecision numerical_rank(const ComplexMatrix& m, double tol_rank) {
  ensure_finite(m, "numerical_rank");
  Eigen::JacobiSVD<ComplexMatrix> dec(m);
  RankDecision d;
  d.sigma = dec.singularValues();
  const double sigma_max = d.sigma.size() > 0 ? d.sigma(0) : 0.0;
  d.tol_used = tol_rank > 0.0
                   ? tol_rank
                   : static_cast<double>(std::max(m.rows(), m.cols())) *
                         std::numeric_limits<double>::epsilon() * sigma_max;
  Index r = 0;
  while (r < d.sigma.size() && d.sigma(r) > d.tol_used) ++r;
  d.rank = r;
  const double inf = std::numeric_limits<double>::infinity();
  if (r == 0 || r == d.sigma.size() || d.sigma(r) == 0.0) {
    d.gap_ratio = inf;
  } else {
    d.gap_ratio = d.sigma(r - 1) / d.sigma(r);
  }
  return d;
}

ComplexMatrix kernel_basis(const ComplexMatrix& m, double tol_rank) {
  SvdResult s = svd(m);
  RankDecision d = numerical_rank(m, tol_rank);
  return s.v.rightCols(m.cols() - d.rank);
}

ComplexMatrix pseudo_inverse(const ComplexMatrix& m, double tol_rank) {
  SvdResult s = svd(m);
  RankDecision d = numerical_rank(m, tol_rank);
  ComplexMatrix g = ComplexMatrix::Zero(m.cols(), m.rows());
  for (Index k = 0; k < d.rank; ++k) {
    g += (1.0 / d.sigma(k)) * s.v.col(k) * s.u.col(k).adjoint();
  }
  return g;
}

double operator_norm(const ComplexMatrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<ComplexMatrix> dec(m);
  return dec.singularValues().size() > 0 ? dec.singularValues()(0) : 0.0;
}

ComplexMatrix range_basis(const ComplexMatrix& m, double tol_rank) {
  if (m.rows() == 0 || m.cols() == 0) return ComplexMatrix(m.rows(), 0);
  SvdResult s = svd(m);
  RankDecision d = numerical_rank(m, tol_rank);
  return s.u.leftCols(d.rank);
}

double subspace_containment(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() == 0) return 0.0;
  if (b.cols() == 0) return operator_norm(a);
  return operator_norm(a - b * (b.adjoint() * a));
}

double subspace_mutual_residual(const ComplexMatrix& a, const ComplexMatrix& b) {
  return std::max(subspace_containment(a, b), subspace_containment(b, a));
}

double smallest_kept_sigma(const RankDecision& d) {
  if (d.rank == 0) return std::numeric_limits<double>::infinity();
  return d.sigma(d.rank - 1);
}

double relative_residual(const ComplexMatrix& a, const ComplexMatrix& b) {
  return (a - b).norm() / (1.0 + a.norm());
}

}  // namespace kmod
