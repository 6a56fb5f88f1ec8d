#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "qlab/composite_space.hpp"

namespace qlab {

using cxd = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// Dense complex square matrix with attached composite-space metadata.
// Used for states (density matrices), unitaries, observables, projectors.
// Immutable after construction; all operations return new values.
class Operator {
public:
    Operator(Matrix entries, CompositeSpace space);

    static Operator identity(const CompositeSpace& space);
    static Operator zero(const CompositeSpace& space);

    const Matrix& matrix() const { return m_; }
    const CompositeSpace& space() const { return space_; }
    int dim() const { return static_cast<int>(m_.rows()); }

    Operator adjoint() const;
    cxd trace() const;
    double frobenius_norm() const;
    // Sum of singular values; for hermitian arguments this is Σ|eigenvalue|.
    double trace_norm() const;

    // Classification predicates, each decidable within the given tolerance
    // (entrywise for hermitian/unitary/projector defects, spectral for PSD).
    bool is_hermitian(double tol = 1e-10) const;
    bool is_unitary(double tol = 1e-10) const;
    bool is_psd(double tol = 1e-10) const;
    bool is_projector(double tol = 1e-10) const;
    bool is_density(double tol = 1e-10) const;
    // max-entry modulus of (M - M†); 0 for exactly hermitian input.
    double hermiticity_defect() const;

    Operator operator+(const Operator& other) const;
    Operator operator-(const Operator& other) const;
    Operator operator*(const Operator& other) const; // composition, same space
    friend Operator operator*(cxd scalar, const Operator& op);

private:
    Matrix m_;
    CompositeSpace space_;
};

// Kronecker product; result space is the concatenation of the factor lists.
Operator tensor_product(const Operator& a, const Operator& b);

// Trace out every factor not listed in `keep`; the result lives on the kept
// factors in their original order. `keep` must be a nonempty proper subset.
Operator partial_trace(const Operator& m, const std::vector<int>& keep);

// Frobenius distance minimized over a global phase:
// min_φ ‖U − e^{iφ}V‖_F with the closed form φ = arg tr(V†U).
double phase_aligned_distance(const Operator& u, const Operator& v);

// Lift an operator acting on the listed factors (in the listed order) to the
// full space, acting as the identity on every other factor.
Operator embed_on_factors(const Operator& op, const CompositeSpace& space,
                          const std::vector<int>& targets);

} // namespace qlab
