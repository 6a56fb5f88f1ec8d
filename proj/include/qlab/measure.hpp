#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "qlab/basis.hpp"
#include "qlab/observable.hpp"

namespace qlab::measure {

// Raised when a selective update is requested for an outcome of (numerically)
// zero Born probability; the conditional state does not exist.
class impossible_outcome : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct MeasureOutcome {
    Operator state;     // Π ρ Π / tr(ρΠ)
    double probability; // tr(ρΠ)
};

// Conditional state update for the given eigenvalue. `outcome` must match a
// spectrum entry within match_tol; probabilities at or below prob_floor raise
// impossible_outcome rather than returning a NaN-filled state.
MeasureOutcome selective_measure(const Operator& rho, const Observable& obs, double outcome,
                                 double match_tol = 1e-9, double prob_floor = 1e-12);

// Outcome-averaged update Σ_x Π_x ρ Π_x: trace-preserving, idempotent, equal
// to zeroing the off-diagonal blocks of ρ in the observable eigenbasis.
Operator nonselective_measure(const Operator& rho, const Observable& obs);

// How decohered a pure system+environment state is, relative to a system
// basis: eta is the largest normalized overlap |⟨E_i|E_j⟩| between conditional
// environment states whose branch weights both exceed the threshold, 0 by
// convention when at most one branch weight survives.
struct EtaReport {
    double eta = 0.0;
    std::string basis_label;
    Eigen::MatrixXd pairwise_overlaps; // (i,j) normalized overlap, 0 when below threshold
    std::vector<double> weights;       // branch weights c_i = ‖(⟨i|⊗1)ψ‖
};

// The system is identified as the leading factors of psi's space whose
// dimensions match the basis space exactly; everything after is environment.
EtaReport decoherence_eta(const StateVector& psi, const Basis& basis,
                          double weight_threshold = 1e-9);

// True iff eta ≤ tol: every pair of surviving branches has (near-)orthogonal
// environment states, equivalently the reduced system state is diagonal in
// the basis.
bool is_recorded(const StateVector& psi, const Basis& basis, double tol);

// Unitary action on full system+environment states. Lets callers supply
// structured evolutions (local-coupling circuits) whose dense matrix would
// exceed desk scale.
using Evolution = std::function<StateVector(const StateVector&)>;

// True iff every basis vector |A_i⟩ satisfies U(|A_i⟩⊗|e0⟩) = |A_i⟩⊗(env):
// the reduced system state of the output equals |A_i⟩⟨A_i| within tol.
bool is_conserved_basis(const Evolution& u, const CompositeSpace& full_space,
                        const StateVector& e0, const Basis& basis, double tol);
bool is_conserved_basis(const Operator& u, const StateVector& e0, const Basis& basis,
                        double tol);

struct ProcessReport {
    bool projective = false;
    bool nonselective = false;
    std::vector<StateVector> witnesses; // system states whose histories fail to split
};

// Probes whether the interaction splits every initial system state in the
// given basis: all basis vectors, all pairwise equal-weight superpositions
// with relative phases ±1 and ±i, plus sample_count Haar-random states.
// nonselective = all probes recorded; projective = nonselective and the basis
// is conserved. Random probes detect violations with probability 1; the
// structured probes pin the classical corner cases.
ProcessReport is_measurement_process(const Evolution& u, const CompositeSpace& full_space,
                                     const StateVector& e0, const Basis& basis,
                                     double tol = 1e-9, int sample_count = 32,
                                     std::uint64_t seed = 7);
ProcessReport is_measurement_process(const Operator& u, const StateVector& e0,
                                     const Basis& basis, double tol = 1e-9,
                                     int sample_count = 32, std::uint64_t seed = 7);

} // namespace qlab::measure
