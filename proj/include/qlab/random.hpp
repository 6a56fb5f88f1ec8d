#pragma once

#include <cstdint>
#include <random>
#include <string_view>

#include "qlab/state_vector.hpp"

namespace qlab {

// Deterministic random source. Uses mt19937_64 (sequence pinned by the
// standard) with explicit uniform/Gaussian transforms so that identical seeds
// give bit-identical streams on every platform; the library never uses the
// implementation-defined std <random> distributions.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }
    // Uniform in [0, 1) with 53-bit resolution.
    double uniform();
    // Uniform integer in [0, n).
    int uniform_int(int n);
    // Standard normal via Box-Muller (no state caching: two uniforms per call).
    double gaussian();
    // (gaussian + i·gaussian)/√2, standard complex normal.
    cxd complex_gaussian();

private:
    std::mt19937_64 gen_;
};

// Stable seed derivation: mixes the root seed with a hash of the task label,
// so every stochastic sub-task draws from an independent stream regardless of
// scheduling order.
std::uint64_t derive_seed(std::uint64_t root, std::string_view label);

// Haar-distributed unitary: QR of a complex Ginibre matrix with the R-diagonal
// phase correction. Deterministic under a fixed seed.
Operator random_unitary(const CompositeSpace& space, std::uint64_t seed);

// Density matrix of the given rank: normalized G·G† with G a total×rank
// Ginibre sample. PSD, trace 1, rank exactly `rank` (probability 1).
Operator random_density(const CompositeSpace& space, int rank, std::uint64_t seed);

// Haar-distributed pure state (normalized complex Gaussian vector).
StateVector random_pure(const CompositeSpace& space, std::uint64_t seed);

} // namespace qlab
