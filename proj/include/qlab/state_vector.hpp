#pragma once

#include <vector>

#include "qlab/operator.hpp"

namespace qlab {

// Complex unit vector over a composite space. Construction normalizes and
// guarantees norm 1 within 1e-12; a zero input vector is rejected.
class StateVector {
public:
    StateVector(Vector amplitudes, CompositeSpace space);

    // Computational basis state |index⟩ (flat index).
    static StateVector basis_state(const CompositeSpace& space, int index);

    const Vector& amplitudes() const { return v_; }
    const CompositeSpace& space() const { return space_; }
    int dim() const { return static_cast<int>(v_.size()); }

    // ⟨this|other⟩.
    cxd inner(const StateVector& other) const;
    // Rank-1 density matrix |ψ⟩⟨ψ|.
    Operator density() const;
    StateVector tensor(const StateVector& other) const;

private:
    Vector v_;
    CompositeSpace space_;
};

// Reorder tensor factors: factor perm[k] of the input becomes factor k of the
// output. perm must be a permutation of 0..factor_count-1.
StateVector permute_factors(const StateVector& psi, const std::vector<int>& perm);

// Apply a unitary that acts on the listed factors (in the listed order) and
// leaves every other factor untouched. Cost scales with the state dimension
// times the local operator dimension, never with a full-space dense matrix.
StateVector apply_on_factors(const StateVector& psi, const Operator& u,
                             const std::vector<int>& targets);

// Reduced density matrix of the listed factors of a pure state.
Operator reduced_density(const StateVector& psi, const std::vector<int>& keep);

// Number of singular values of the cut-reshaped amplitude matrix above tol:
// 1 means the state is a product across the cut (left factors | the rest).
int schmidt_rank(const StateVector& psi, const std::vector<int>& left_factors,
                 double tol = 1e-10);

} // namespace qlab
