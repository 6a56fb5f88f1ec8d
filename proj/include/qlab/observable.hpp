#pragma once

#include <optional>
#include <vector>

#include "qlab/operator.hpp"

namespace qlab {

// Hermitian operator with cached spectral decomposition: distinct eigenvalues
// paired with orthogonal projectors. Eigenvalues within the clustering
// tolerance are merged into one projector (degeneracy shows as rank > 1).
// Invariants (each within 1e-10): projectors idempotent, mutually orthogonal,
// summing to the identity; Σ eigenvalue·projector reconstructs the operator.
class Observable {
public:
    struct EigenPair {
        double value;
        Operator projector;
    };

    const Operator& op() const { return op_; }
    // Sorted ascending by eigenvalue.
    const std::vector<EigenPair>& spectrum() const { return spectrum_; }
    // Projector for the eigenvalue nearest `outcome`, if within match_tol.
    const Operator* projector_for(double outcome, double match_tol = 1e-9) const;

    friend Observable spectral_decomposition(const Operator&, double, double);

private:
    Observable(Operator op, std::vector<EigenPair> spectrum);

    Operator op_;
    std::vector<EigenPair> spectrum_;
};

// Diagonalize a hermitian operator, clustering eigenvalues closer than
// cluster_tol into shared projectors. Rejects input whose hermiticity defect
// exceeds hermit_tol (the defect is reported in the error message).
Observable spectral_decomposition(const Operator& h, double cluster_tol = 1e-8,
                                  double hermit_tol = 1e-10);

} // namespace qlab
