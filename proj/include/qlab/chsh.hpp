#pragma once

#include <array>

#include "qlab/operator.hpp"

namespace qlab::chsh {

// Best Bell-CHSH correlation value found for a two-qubit state, together with
// the measurement directions that realize it. Directions are parametrized as
// angles inside the plane spanned by the two dominant principal axes of the
// spin correlation matrix T_ij = tr(ρ σ_i ⊗ σ_j): a(θ) = cosθ·u₁ + sinθ·u₂
// on Alice's side (left singular vectors), b(φ) likewise on Bob's side (right
// singular vectors). Restricting to that plane loses nothing: the optimum
// over arbitrary unit vectors always lies in it.
struct ChshResult {
    double value = 0.0;
    std::array<double, 4> angles{}; // θ_a, θ_a', θ_b, θ_b'
    Eigen::Matrix3d correlation = Eigen::Matrix3d::Zero();
    std::array<double, 2> plane_singular_values{};
};

// Maximizes E(a,b) + E(a,b') + E(a',b) − E(a',b') over measurement
// directions: coarse grid over the three angles relative to θ_a = 0, then
// simplex (Nelder–Mead) refinement over all four angles. Every reported value
// is realized by genuine unit-vector settings, so it is a valid lower bound
// at all times and converges to the true maximum.
ChshResult chsh_max(const Operator& rho, int grid_points = 16, bool refine = true);

} // namespace qlab::chsh
