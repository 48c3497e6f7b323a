#pragma once

// Seeded random inputs for tests, validation and benchmarks.

#include <cstdint>
#include <random>

#include "alpha_procrustes/linalg_core.hpp"

namespace alpha_procrustes::sampling {

using Rng = std::mt19937_64;

/// Haar-distributed orthogonal matrix (QR of a Gaussian matrix with sign fix).
Matrix random_orthogonal(Rng& rng, Index n);

/// Q diag(lambda) Q^T with log-uniform eigenvalues in [lo, hi].
SpdMatrix random_spd(Rng& rng, Index n, double lo = 0.1, double hi = 10.0);

/// PSD matrix of the given rank (rank < n gives an exactly singular matrix).
SpdMatrix random_psd(Rng& rng, Index n, Index rank);

/// Symmetric matrix with standard normal entries on and above the diagonal.
SymMatrix random_symmetric(Rng& rng, Index n);

/// Pair of commuting SPD matrices (shared eigenvectors).
std::pair<SpdMatrix, SpdMatrix> random_commuting_pair(Rng& rng, Index n);

/// m x d matrix of N(shift, scale^2) samples, rows = samples.
Matrix random_points(Rng& rng, Index m, Index d, double shift = 0.0, double scale = 1.0);

Vector random_vector(Rng& rng, Index n);

}  // namespace alpha_procrustes::sampling
