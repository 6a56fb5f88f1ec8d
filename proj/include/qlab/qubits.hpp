#pragma once

#include "qlab/state_vector.hpp"

namespace qlab {

// Single-qubit conventions used across the library: flat index 0 is the
// spin-up / +1 eigenstate of sigma_z, index 1 is spin-down.
inline CompositeSpace qubit() { return CompositeSpace::single(2); }

inline Operator sigma_x() {
    Matrix m(2, 2);
    m << 0, 1, 1, 0;
    return Operator(m, qubit());
}

inline Operator sigma_y() {
    Matrix m(2, 2);
    m << cxd(0, 0), cxd(0, -1), cxd(0, 1), cxd(0, 0);
    return Operator(m, qubit());
}

inline Operator sigma_z() {
    Matrix m(2, 2);
    m << 1, 0, 0, -1;
    return Operator(m, qubit());
}

inline Operator hadamard() {
    Matrix m(2, 2);
    const double s = 1.0 / std::sqrt(2.0);
    m << s, s, s, -s;
    return Operator(m, qubit());
}

inline StateVector spin_up() { return StateVector::basis_state(qubit(), 0); }
inline StateVector spin_down() { return StateVector::basis_state(qubit(), 1); }

inline StateVector spin_up_x() {
    Vector v(2);
    v << 1, 1;
    return StateVector(std::move(v), qubit());
}

inline StateVector spin_down_x() {
    Vector v(2);
    v << 1, -1;
    return StateVector(std::move(v), qubit());
}

// Controlled-NOT on two qubits, control first.
inline Operator cnot() {
    Matrix m = Matrix::Zero(4, 4);
    m(0, 0) = 1;
    m(1, 1) = 1;
    m(2, 3) = 1;
    m(3, 2) = 1;
    return Operator(m, CompositeSpace({2, 2}));
}

// Swap of two equal-dimension factors.
inline Operator swap_gate(int d = 2) {
    const CompositeSpace space({d, d});
    Matrix m = Matrix::Zero(space.total(), space.total());
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) m(i * d + j, j * d + i) = 1;
    return Operator(std::move(m), space);
}

} // namespace qlab
