#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>

namespace kmod {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

// Thrown when operand shapes are incompatible.
struct DimensionMismatch : std::invalid_argument {
  explicit DimensionMismatch(const std::string& what) : std::invalid_argument(what) {}
};

// Thrown when a matrix required to be Hermitian fails the symmetry check.
struct NotHermitian : std::invalid_argument {
  explicit NotHermitian(const std::string& what) : std::invalid_argument(what) {}
};

// Thrown when an eigenvalue falls outside the domain of a scalar function.
struct DomainError : std::domain_error {
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

// Thrown when an element claimed to be a minimal projection is not one.
struct NotMinimalProjection : std::invalid_argument {
  explicit NotMinimalProjection(const std::string& what) : std::invalid_argument(what) {}
};

// Thrown by the inverse bounded transform when 1 - F*F is numerically singular.
struct DefectSingular : std::runtime_error {
  explicit DefectSingular(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when no stable pseudo-inverse exists across truncation levels.
struct NoPseudoInverse : std::runtime_error {
  explicit NoPseudoInverse(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when an index is requested for an operator that is not Fredholm.
struct NotFredholm : std::runtime_error {
  explicit NotFredholm(const std::string& what) : std::runtime_error(what) {}
};

// Thrown by the invertible-plus-finite-rank decomposition when index != 0.
struct IndexNonzero : std::runtime_error {
  explicit IndexNonzero(const std::string& what) : std::runtime_error(what) {}
};

// Rejects NaN/Inf entries; all public entry points assume finite data.
void ensure_finite(const ComplexMatrix& m, const char* what);

}  // namespace kmod
