#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "kmod/linalg.hpp"

using namespace kmod;

namespace {

ComplexMatrix random_complex(std::mt19937_64& rng, Index rows, Index cols) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  ComplexMatrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) m(i, j) = Complex(gauss(rng), gauss(rng));
  }
  return m;
}

ComplexMatrix random_hermitian(std::mt19937_64& rng, Index n) {
  const ComplexMatrix a = random_complex(rng, n, n);
  return 0.5 * (a + a.adjoint());
}

ComplexMatrix random_psd(std::mt19937_64& rng, Index n) {
  const ComplexMatrix a = random_complex(rng, n, n);
  return a * a.adjoint();
}

}  // namespace

TEST_CASE("hermitian_eig on the identity") {
  const EigResult e = hermitian_eig(ComplexMatrix::Identity(2, 2));
  CHECK(e.eigenvalues(0) == doctest::Approx(1.0));
  CHECK(e.eigenvalues(1) == doctest::Approx(1.0));
  CHECK((e.vectors.adjoint() * e.vectors - ComplexMatrix::Identity(2, 2)).norm() <
        1e-14);
}

TEST_CASE("hermitian_eig sorts an already diagonal matrix ascending") {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 0) = 2.0;
  m(1, 1) = -1.0;
  const EigResult e = hermitian_eig(m);
  CHECK(e.eigenvalues(0) == doctest::Approx(-1.0));
  CHECK(e.eigenvalues(1) == doctest::Approx(2.0));
}

TEST_CASE("hermitian_eig reconstructs a random Hermitian matrix") {
  std::mt19937_64 rng(12345);
  const ComplexMatrix m = random_hermitian(rng, 8);
  const EigResult e = hermitian_eig(m);
  const ComplexMatrix back =
      e.vectors * e.eigenvalues.asDiagonal() * e.vectors.adjoint();
  CHECK((m - back).norm() <= 1e-12 * m.norm());
}

TEST_CASE("hermitian_eig rejects bad inputs") {
  CHECK_THROWS_AS(hermitian_eig(ComplexMatrix::Zero(2, 3)), DimensionMismatch);
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 1) = 1.0;  // not Hermitian
  CHECK_THROWS_AS(hermitian_eig(m), NotHermitian);
  ComplexMatrix bad = ComplexMatrix::Zero(2, 2);
  bad(0, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS(hermitian_eig(bad));
}

TEST_CASE("svd of the zero matrix and a diagonal") {
  const SvdResult z = svd(ComplexMatrix::Zero(3, 3));
  CHECK(z.sigma.maxCoeff() == 0.0);

  ComplexMatrix d = ComplexMatrix::Zero(2, 2);
  d(0, 0) = 3.0;
  const SvdResult s = svd(d);
  CHECK(s.sigma(0) == doctest::Approx(3.0));
  CHECK(s.sigma(1) == doctest::Approx(0.0));
}

TEST_CASE("svd reconstructs a random rectangular matrix") {
  std::mt19937_64 rng(777);
  const ComplexMatrix m = random_complex(rng, 6, 4);
  const SvdResult s = svd(m);
  ComplexMatrix sigma = ComplexMatrix::Zero(6, 4);
  for (Index k = 0; k < 4; ++k) sigma(k, k) = s.sigma(k);
  CHECK((m - s.u * sigma * s.v.adjoint()).norm() <= 1e-12 * m.norm());
  for (Index k = 1; k < s.sigma.size(); ++k) CHECK(s.sigma(k) <= s.sigma(k - 1));
}

TEST_CASE("hermitian_function with the identity map returns the input") {
  std::mt19937_64 rng(99);
  const ComplexMatrix m = random_hermitian(rng, 6);
  const ComplexMatrix out = hermitian_function(m, [](double x) { return x; });
  CHECK((m - out).norm() <= 1e-12 * m.norm());
}

TEST_CASE("hermitian_function matches the scalar formula on a diagonal") {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(1, 1) = 3.0;
  const ComplexMatrix out =
      hermitian_function(m, [](double x) { return 1.0 / std::sqrt(1.0 + x); });
  CHECK(std::abs(out(0, 0) - Complex(1.0, 0.0)) < 1e-14);
  CHECK(std::abs(out(1, 1) - Complex(0.5, 0.0)) < 1e-14);
}

TEST_CASE("hermitian_function square root squares back") {
  std::mt19937_64 rng(4242);
  const ComplexMatrix m = random_psd(rng, 7);
  const ComplexMatrix root = hermitian_function(
      m, [](double x) { return std::sqrt(std::max(x, 0.0)); },
      [](double x) { return x > -1e-10; });
  CHECK((root * root - m).norm() <= 1e-10 * (1.0 + m.norm()));
}

TEST_CASE("hermitian_function rejects out-of-domain eigenvalues") {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(1, 1) = 3.0;  // eigenvalue 0 violates x > tol
  CHECK_THROWS_AS(hermitian_function(
                      m, [](double x) { return 1.0 / std::sqrt(x); },
                      [](double x) { return x > 1e-12; }),
                  DomainError);
}

TEST_CASE("numerical_rank defaults") {
  CHECK(numerical_rank(ComplexMatrix::Identity(3, 3)).rank == 3);

  ComplexMatrix nearly = ComplexMatrix::Zero(2, 2);
  nearly(0, 0) = 1.0;
  nearly(1, 1) = 1e-18;
  CHECK(numerical_rank(nearly).rank == 1);
}

TEST_CASE("numerical_rank of an outer product is one") {
  std::mt19937_64 rng(31);
  const ComplexMatrix u = random_complex(rng, 5, 1);
  const ComplexMatrix v = random_complex(rng, 4, 1);
  const RankDecision d = numerical_rank(u * v.adjoint());
  CHECK(d.rank == 1);
  CHECK(d.gap_ratio > 1e10);
}

TEST_CASE("kernel_basis shapes and quality") {
  ComplexMatrix inv = ComplexMatrix::Identity(3, 3) * 2.0;
  CHECK(kernel_basis(inv).cols() == 0);

  const ComplexMatrix z = kernel_basis(ComplexMatrix::Zero(3, 3));
  CHECK(z.cols() == 3);
  CHECK((z.adjoint() * z - ComplexMatrix::Identity(3, 3)).norm() < 1e-13);

  ComplexMatrix d = ComplexMatrix::Zero(3, 3);
  d(0, 0) = 1.0;
  d(2, 2) = 2.0;
  const ComplexMatrix k = kernel_basis(d);
  REQUIRE(k.cols() == 1);
  CHECK(std::abs(std::abs(k(1, 0)) - 1.0) < 1e-13);
  CHECK((d * k).norm() < 1e-13);
}

TEST_CASE("rank and kernel dimensions always add up") {
  std::mt19937_64 rng(555);
  for (int trial = 0; trial < 25; ++trial) {
    const Index rows = 2 + static_cast<Index>(trial % 5);
    const Index cols = 2 + static_cast<Index>((trial * 7) % 5);
    const Index inner = 1 + static_cast<Index>(trial % 3);
    const ComplexMatrix m =
        random_complex(rng, rows, inner) * random_complex(rng, inner, cols);
    const RankDecision d = numerical_rank(m);
    CHECK(d.rank + kernel_basis(m).cols() == cols);
    CHECK((m * kernel_basis(m)).norm() <= d.tol_used + 1e-13 * m.norm());
  }
}

TEST_CASE("the inverse square root identity behind the transform") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 10; ++trial) {
    const Index n = 3 + static_cast<Index>(trial % 5);
    const ComplexMatrix m = random_psd(rng, n);
    const ComplexMatrix q = hermitian_function(
        m, [](double x) { return 1.0 / std::sqrt(1.0 + x); },
        [](double x) { return x > -1.0; });
    const ComplexMatrix shifted = ComplexMatrix::Identity(n, n) + m;
    CHECK((q * q * shifted - ComplexMatrix::Identity(n, n)).norm() <=
          1e-10 * (1.0 + m.norm()));
  }
}

TEST_CASE("pseudo_inverse reproduces the inverse on well-conditioned input") {
  std::mt19937_64 rng(8);
  const ComplexMatrix m =
      random_complex(rng, 5, 5) + 4.0 * ComplexMatrix::Identity(5, 5);
  const ComplexMatrix g = pseudo_inverse(m);
  CHECK((g * m - ComplexMatrix::Identity(5, 5)).norm() < 1e-10);
}

TEST_CASE("pseudo_inverse defects are projections for rank-deficient input") {
  std::mt19937_64 rng(9);
  const ComplexMatrix m = random_complex(rng, 6, 2) * random_complex(rng, 2, 6);
  const ComplexMatrix g = pseudo_inverse(m);
  const ComplexMatrix left = g * m;
  CHECK((left * left - left).norm() < 1e-10);
  CHECK(numerical_rank(left, 0.5).rank == 2);
}

TEST_CASE("operator_norm equals the largest singular value") {
  std::mt19937_64 rng(10);
  const ComplexMatrix m = random_complex(rng, 4, 6);
  CHECK(operator_norm(m) == doctest::Approx(svd(m).sigma(0)));
}
