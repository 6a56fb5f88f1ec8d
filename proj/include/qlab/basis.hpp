#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "qlab/qubits.hpp"

namespace qlab {

// Orthonormal basis of a (sub)system, stored as matrix columns.
class Basis {
public:
    Basis(CompositeSpace space, Matrix columns, std::string name = "",
          double ortho_tol = 1e-10)
        : space_(std::move(space)), m_(std::move(columns)), name_(std::move(name)) {
        if (m_.rows() != space_.total() || m_.cols() != space_.total())
            throw std::invalid_argument("Basis: need a full square set of columns");
        const double defect =
            (m_.adjoint() * m_ - Matrix::Identity(m_.rows(), m_.cols())).cwiseAbs().maxCoeff();
        if (defect > ortho_tol)
            throw std::invalid_argument("Basis: columns not orthonormal (defect " +
                                        std::to_string(defect) + ")");
    }

    static Basis computational(const CompositeSpace& space, std::string name = "z") {
        return Basis(space, Matrix::Identity(space.total(), space.total()), std::move(name));
    }

    const CompositeSpace& space() const { return space_; }
    const Matrix& columns() const { return m_; }
    const std::string& name() const { return name_; }
    int size() const { return static_cast<int>(m_.cols()); }

    StateVector vector(int i) const {
        if (i < 0 || i >= size()) throw std::invalid_argument("Basis: index out of range");
        return StateVector(m_.col(i), space_);
    }

private:
    CompositeSpace space_;
    Matrix m_;
    std::string name_;
};

inline Basis z_basis() { return Basis::computational(qubit(), "z"); }

inline Basis x_basis() {
    Matrix m(2, 2);
    const double s = 1.0 / std::sqrt(2.0);
    m << s, s, s, -s;
    return Basis(qubit(), std::move(m), "x");
}

// Qubit basis {cosθ/2 |0⟩ + e^{iφ} sinθ/2 |1⟩, and its antipode}.
inline Basis bloch_basis(double theta, double phi, std::string name = "bloch") {
    Matrix m(2, 2);
    const cxd e = std::polar(1.0, phi);
    m(0, 0) = std::cos(theta / 2);
    m(1, 0) = e * std::sin(theta / 2);
    m(0, 1) = -std::conj(e) * std::sin(theta / 2);
    m(1, 1) = std::cos(theta / 2);
    return Basis(qubit(), std::move(m), std::move(name));
}

// Two-spin basis {|00⟩, |11⟩, (|01⟩+|10⟩)/√2, (|01⟩−|10⟩)/√2}: the common
// refinement of the total-spin-squared eigenspaces.
inline Basis total_spin_refinement_basis() {
    const double s = 1.0 / std::sqrt(2.0);
    Matrix m = Matrix::Zero(4, 4);
    m(0, 0) = 1;
    m(3, 1) = 1;
    m(1, 2) = s;
    m(2, 2) = s;
    m(1, 3) = s;
    m(2, 3) = -s;
    return Basis(CompositeSpace({2, 2}), std::move(m), "total_spin_refinement");
}

// Bell basis {Φ+, Φ-, Ψ+, Ψ-}.
inline Basis bell_basis() {
    const double s = 1.0 / std::sqrt(2.0);
    Matrix m = Matrix::Zero(4, 4);
    m(0, 0) = s; m(3, 0) = s;
    m(0, 1) = s; m(3, 1) = -s;
    m(1, 2) = s; m(2, 2) = s;
    m(1, 3) = s; m(2, 3) = -s;
    return Basis(CompositeSpace({2, 2}), std::move(m), "bell");
}

} // namespace qlab
