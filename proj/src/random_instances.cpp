#include "kmod/random_instances.hpp"

namespace kmod {

ComplexMatrix random_matrix(Rng& rng, Index rows, Index cols) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  ComplexMatrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      m(i, j) = Complex(re, im);
    }
  }
  return m;
}

ModuleVector random_module_vector(Rng& rng, Index d, Index m) {
  return ModuleVector(random_matrix(rng, d, m));
}

AdjointableOp random_adjointable(Rng& rng, Index d, Index m) {
  return AdjointableOp(d, random_matrix(rng, m, m));
}

AdjointableOp random_rank_deficient(Rng& rng, Index d, Index m, Index r) {
  return AdjointableOp(d, random_matrix(rng, m, r) * random_matrix(rng, r, m));
}

ComplexMatrix random_psd(Rng& rng, Index n) {
  const ComplexMatrix a = random_matrix(rng, n, n);
  return a * a.adjoint();
}

CompactElement random_minimal_projection(Rng& rng, Index d) {
  ComplexVector v = random_matrix(rng, d, 1).col(0);
  v /= v.norm();
  return CompactElement(v * v.adjoint());
}

Generator random_bounded_generator(Rng& rng) {
  std::uniform_int_distribution<int> term_count(1, 3);
  std::uniform_int_distribution<int> kind_pick(0, 2);
  std::uniform_int_distribution<int> step_pick(0, 3);
  std::uniform_real_distribution<double> coeff(0.3, 1.5);
  const int steps[4] = {-2, -1, 1, 2};

  std::vector<Generator> terms;
  const int n_terms = term_count(rng);
  for (int i = 0; i < n_terms; ++i) {
    switch (kind_pick(rng)) {
      case 0:
        terms.push_back(
            Generator::weighted_shift(steps[step_pick(rng)], Symbol::constant(coeff(rng))));
        break;
      case 1:
        terms.push_back(Generator::diagonal(Symbol::constant(coeff(rng))));
        break;
      default: {
        ComplexMatrix block = 0.5 * random_matrix(rng, 3, 3);
        terms.push_back(Generator::finite_rank(std::move(block)));
        break;
      }
    }
  }
  return Generator::sum(std::move(terms));
}

}  // namespace kmod
