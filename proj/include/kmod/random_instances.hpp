#pragma once

#include <random>

#include "kmod/regular_ops.hpp"

namespace kmod {

using Rng = std::mt19937_64;

// Standard-normal complex entries.
ComplexMatrix random_matrix(Rng& rng, Index rows, Index cols);

ModuleVector random_module_vector(Rng& rng, Index d, Index m);

AdjointableOp random_adjointable(Rng& rng, Index d, Index m);

// Multiplier of exact rank r < m (product of thin factors).
AdjointableOp random_rank_deficient(Rng& rng, Index d, Index m, Index r);

// Random Hermitian positive semidefinite matrix.
ComplexMatrix random_psd(Rng& rng, Index n);

// Random minimal projection v v^* from a random unit vector.
CompactElement random_minimal_projection(Rng& rng, Index d);

// Bounded banded tower: a sum of constant-weight shifts, a constant
// diagonal, and optionally a small finite-rank block.
Generator random_bounded_generator(Rng& rng);

}  // namespace kmod
