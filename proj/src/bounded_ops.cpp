#include "kmod/bounded_ops.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace kmod {

namespace {

void require_same_module(const AdjointableOp& t, const AdjointableOp& s, const char* op) {
  if (t.d != s.d || t.m != s.m) {
    std::ostringstream os;
    os << op << ": operators act on different modules";
    throw DimensionMismatch(os.str());
  }
}

}  // namespace

AdjointableOp::AdjointableOp(Index d_, ComplexMatrix r) : d(d_), m(r.rows()), right_mult(std::move(r)) {
  ensure_finite(right_mult, "AdjointableOp");
  if (d < 1 || right_mult.rows() < 1 || right_mult.rows() != right_mult.cols()) {
    throw DimensionMismatch("AdjointableOp: multiplier must be square, d >= 1");
  }
}

AdjointableOp AdjointableOp::identity(Index d, Index m) {
  return AdjointableOp(d, ComplexMatrix::Identity(m, m));
}

AdjointableOp AdjointableOp::zero(Index d, Index m) {
  return AdjointableOp(d, ComplexMatrix::Zero(m, m));
}

AdjointableOp AdjointableOp::from_psi(Index d, const ComplexMatrix& phi) {
  if (phi.rows() != phi.cols()) {
    throw DimensionMismatch("from_psi: localized matrix must be square");
  }
  return AdjointableOp(d, phi.transpose());
}

ModuleVector apply(const AdjointableOp& t, const ModuleVector& x) {
  if (t.d != x.dim_h() || t.m != x.dim_m()) {
    throw DimensionMismatch("apply: operator and vector shapes differ");
  }
  return ModuleVector(x.matrix * t.right_mult);
}

AdjointableOp adjoint(const AdjointableOp& t) {
  return AdjointableOp(t.d, t.right_mult.adjoint());
}

AdjointableOp compose(const AdjointableOp& t, const AdjointableOp& s) {
  require_same_module(t, s, "compose");
  // (t.s)(x) = (x R_s) R_t.
  return AdjointableOp(t.d, s.right_mult * t.right_mult);
}

AdjointableOp add(const AdjointableOp& t, const AdjointableOp& s) {
  require_same_module(t, s, "add");
  return AdjointableOp(t.d, t.right_mult + s.right_mult);
}

AdjointableOp scale(Complex c, const AdjointableOp& t) {
  return AdjointableOp(t.d, c * t.right_mult);
}

double op_norm(const AdjointableOp& t) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(t.right_mult * t.right_mult.adjoint());
  const double top = es.eigenvalues().size() > 0 ? es.eigenvalues().maxCoeff() : 0.0;
  return std::sqrt(std::max(top, 0.0));
}

AdjointableOp theta(const ModuleVector& x, const ModuleVector& y) {
  if (x.dim_h() != y.dim_h() || x.dim_m() != y.dim_m()) {
    throw DimensionMismatch("theta: vectors live in different modules");
  }
  // z -> <z,x> y = z (x^* y).
  return AdjointableOp(x.dim_h(), x.matrix.adjoint() * y.matrix);
}

ThetaSpanCertificate theta_span_membership(const AdjointableOp& t, double tol) {
  ThetaSpanCertificate cert;
  SvdResult s = svd(t.right_mult);
  // Keep singular directions until the dropped tail is below tol.
  double tail = 0.0;
  for (Index k = 0; k < s.sigma.size(); ++k) tail += s.sigma(k) * s.sigma(k);
  Index keep = 0;
  while (keep < s.sigma.size() && std::sqrt(std::max(tail, 0.0)) > tol) {
    tail -= s.sigma(keep) * s.sigma(keep);
    ++keep;
  }
  ComplexMatrix reconstructed = ComplexMatrix::Zero(t.m, t.m);
  for (Index k = 0; k < keep; ++k) {
    // theta(x, y) has multiplier x^* y; with x = u a^T (a = conj of the left
    // singular vector) and y = u b^T the multiplier is conj(a) b^T.
    ComplexMatrix x = ComplexMatrix::Zero(t.d, t.m);
    x.row(0) = s.u.col(k).conjugate().transpose();
    ComplexMatrix y = ComplexMatrix::Zero(t.d, t.m);
    y.row(0) = s.v.col(k).adjoint();
    cert.pairs.emplace_back(ModuleVector(std::move(x)), ModuleVector(std::move(y)));
    cert.coefficients.push_back(s.sigma(k));
    reconstructed += s.sigma(k) * s.u.col(k) * s.v.col(k).adjoint();
  }
  cert.residual = (reconstructed - t.right_mult).norm();
  return cert;
}

ComplexMatrix psi(const AdjointableOp& t, const CompactElement& e0, double tol) {
  if (e0.dim_h() != t.d) {
    throw DimensionMismatch("psi: basepoint truncation differs from operator's");
  }
  const ComplexVector v = minimal_projection_vector(e0, tol);
  ComplexMatrix phi(t.m, t.m);
  for (Index j = 0; j < t.m; ++j) {
    ComplexMatrix basis_j = ComplexMatrix::Zero(t.d, t.m);
    basis_j.col(j) = v;
    const ModuleVector image = apply(t, ModuleVector(std::move(basis_j)));
    phi.col(j) = (v.adjoint() * image.matrix).transpose();
  }
  return phi;
}

AdjointableOp psi_inverse(const ComplexMatrix& s, const CompactElement& e0, double tol) {
  ensure_finite(s, "psi_inverse");
  if (s.rows() != s.cols()) {
    throw DimensionMismatch("psi_inverse: localized matrix must be square");
  }
  // Validates the basepoint; the lift itself is basepoint-independent.
  minimal_projection_vector(e0, tol);
  return AdjointableOp::from_psi(e0.dim_h(), s);
}

TransferResidual kernel_range_transfer(const AdjointableOp& t, const CompactElement& e,
                                       double tol_rank) {
  const ComplexVector v = minimal_projection_vector(e);
  const ComplexMatrix phi = psi(t, e);

  // Localized route: kernel and range of the localization matrix.
  const ComplexMatrix ker_local = kernel_basis(phi, tol_rank);
  const ComplexMatrix ran_local = range_basis(phi, tol_rank);

  // Module route for e.Ker t: solve x R = 0 over stacked module coordinates
  // (kron identity), compress by e, localize, orthonormalize.
  const Index d = t.d;
  const Index m = t.m;
  ComplexMatrix stacked = ComplexMatrix::Zero(d * m, d * m);
  for (Index i = 0; i < d; ++i) {
    stacked.block(i * m, i * m, m, m) = t.right_mult.transpose();
  }
  const ComplexMatrix null_stacked = kernel_basis(stacked, tol_rank);
  std::vector<ModuleVector> compressed;
  for (Index k = 0; k < null_stacked.cols(); ++k) {
    ComplexMatrix x(d, m);
    for (Index i = 0; i < d; ++i) {
      x.row(i) = null_stacked.col(k).segment(i * m, m).transpose();
    }
    compressed.emplace_back((v * v.adjoint()) * x);
  }
  ComplexMatrix ker_module(m, static_cast<Index>(compressed.size()));
  for (Index k = 0; k < ker_module.cols(); ++k) {
    ker_module.col(k) = (v.adjoint() * compressed[static_cast<size_t>(k)].matrix).transpose();
  }
  ker_module = range_basis(ker_module, tol_rank);

  // Module route for e.Ran t: images of the lifted basis, localized.
  ComplexMatrix ran_module(m, m);
  for (Index j = 0; j < m; ++j) {
    ComplexMatrix basis_j = ComplexMatrix::Zero(d, m);
    basis_j.col(j) = v;
    const ModuleVector image = apply(t, ModuleVector(std::move(basis_j)));
    ran_module.col(j) = (v.adjoint() * image.matrix).transpose();
  }
  ran_module = range_basis(ran_module, tol_rank);

  return TransferResidual{subspace_mutual_residual(ker_local, ker_module),
                          subspace_mutual_residual(ran_local, ran_module)};
}

BoundedBelowResult is_bounded_below(const AdjointableOp& t, bool restrict_to_ker_perp,
                                    double tol) {
  const RankDecision d = numerical_rank(t.right_mult, tol);
  if (restrict_to_ker_perp) {
    if (d.rank == 0) {
      return BoundedBelowResult{true, std::numeric_limits<double>::infinity()};
    }
    return BoundedBelowResult{true, d.sigma(d.rank - 1)};
  }
  const double smallest = d.sigma.size() > 0 ? d.sigma(d.sigma.size() - 1) : 0.0;
  return BoundedBelowResult{smallest > d.tol_used, smallest};
}

}  // namespace kmod
