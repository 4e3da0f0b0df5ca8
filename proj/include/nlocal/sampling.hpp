#pragma once

#include <random>

#include "nlocal/netmodel.hpp"

namespace nlocal {

// Seeded generators for self-checks, property tests and the verify command.
// All randomness flows from the caller's engine; same engine state, same
// output.

/// Random mixed state: uniform mixture weights over `rank` Gaussian pure
/// states (rank 1 gives a Haar-like pure state).
TwoQubitState random_state(std::mt19937_64& rng, int rank = 4);

/// Uniform (Haar) rotation via a normalized Gaussian quaternion.
Mat3 random_rotation(std::mt19937_64& rng);

/// Haar-random single-qubit unitary.
ComplexMatrix random_su2(std::mt19937_64& rng);

/// Uniform direction on the Bloch sphere.
DichotomicSetting random_setting(std::mt19937_64& rng);

} // namespace nlocal
