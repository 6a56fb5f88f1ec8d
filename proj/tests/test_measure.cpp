#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "qlab/basis.hpp"
#include "qlab/measure.hpp"
#include "qlab/qubits.hpp"
#include "qlab/random.hpp"

using namespace qlab;
using namespace qlab::measure;

namespace {

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

// System-environment state (|0>⊗E0 + |1>⊗E1)/√2 with ⟨E0|E1⟩ = cosθ real.
StateVector overlap_state(double theta, int env_dim = 2) {
    const CompositeSpace space({2, env_dim});
    Vector amps = Vector::Zero(2 * env_dim);
    const double inv = 1.0 / std::sqrt(2.0);
    amps(0) = inv;                                  // |0>⊗|e0>
    amps(env_dim + 0) = inv * std::cos(theta);      // |1>⊗(cosθ|e0> + sinθ|e1>)
    amps(env_dim + 1) = inv * std::sin(theta);
    return StateVector(amps, space);
}

} // namespace

TEST_CASE("selective measurement on a known superposition") {
    const Observable z = spectral_decomposition(sigma_z());
    const Operator plus = spin_up_x().density();

    const MeasureOutcome up = selective_measure(plus, z, 1.0);
    REQUIRE(up.probability == Catch::Approx(0.5));
    REQUIRE(max_abs((up.state - spin_up().density()).matrix()) < 1e-14);
    REQUIRE(up.state.is_density());

    const MeasureOutcome down = selective_measure(plus, z, -1.0);
    REQUIRE(up.probability + down.probability == Catch::Approx(1.0).margin(1e-14));

    // A slightly perturbed outcome label still matches within the default window.
    REQUIRE(selective_measure(plus, z, 1.0 + 1e-10).probability == Catch::Approx(0.5));
}

TEST_CASE("selective measurement error paths") {
    const Observable z = spectral_decomposition(sigma_z());
    REQUIRE_THROWS_AS(selective_measure(spin_up().density(), z, -1.0), impossible_outcome);
    REQUIRE_THROWS_AS(selective_measure(spin_up().density(), z, 0.5), std::invalid_argument);
    const Operator rho2 = random_density(CompositeSpace({2, 2}), 4, 7);
    REQUIRE_THROWS_AS(selective_measure(rho2, z, 1.0), std::invalid_argument);
    REQUIRE_THROWS_AS(nonselective_measure(rho2, z), std::invalid_argument);
}

TEST_CASE("selective probabilities sum to one over random data") {
    const CompositeSpace space({3});
    const Operator rho = random_density(space, 3, 21);
    Rng rng(22);
    Matrix g(3, 3);
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) g(r, c) = rng.complex_gaussian();
    const Observable obs = spectral_decomposition(Operator(0.5 * (g + g.adjoint().eval()), space));
    double total = 0.0;
    for (const auto& pair : obs.spectrum())
        total += selective_measure(rho, obs, pair.value).probability;
    REQUIRE(total == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("nonselective measurement dephasing and block structure") {
    const Observable z = spectral_decomposition(sigma_z());
    const Operator dephased = nonselective_measure(spin_up_x().density(), z);
    REQUIRE(max_abs((dephased - 0.5 * Operator::identity(qubit())).matrix()) < 1e-14);

    // A degenerate observable keeps coherence inside each eigenblock only.
    const CompositeSpace pair({2, 2});
    const Observable zi =
        spectral_decomposition(tensor_product(sigma_z(), Operator::identity(qubit())));
    Vector amps(4);
    amps << 1.0, 1.0, 1.0, 0.0;
    const Operator rho = StateVector(amps, pair).density();
    const Operator blocked = nonselective_measure(rho, zi);
    REQUIRE(std::abs(blocked.matrix()(0, 1) - cxd(1.0 / 3.0, 0.0)) < 1e-14); // same block
    REQUIRE(std::abs(blocked.matrix()(0, 2)) < 1e-15);                       // across blocks
    REQUIRE(std::abs(blocked.trace() - rho.trace()) < 1e-14);

    // Idempotence on random inputs.
    const Operator rnd = random_density(pair, 4, 33);
    const Operator once = nonselective_measure(rnd, zi);
    REQUIRE(max_abs((nonselective_measure(once, zi) - once).matrix()) < 1e-14);
}

TEST_CASE("branch distinguishability metric on a tunable overlap") {
    const Basis z = z_basis();
    for (double theta : {0.1, 0.4, 1.0, 1.5}) {
        const EtaReport report = decoherence_eta(overlap_state(theta), z);
        REQUIRE(report.eta == Catch::Approx(std::cos(theta)).margin(1e-12));
        REQUIRE(report.weights.size() == 2);
        REQUIRE(report.weights[0] == Catch::Approx(1.0 / std::sqrt(2.0)).margin(1e-12));
        REQUIRE(report.weights[1] == Catch::Approx(1.0 / std::sqrt(2.0)).margin(1e-12));
        REQUIRE(report.pairwise_overlaps(0, 1) == Catch::Approx(std::cos(theta)).margin(1e-12));
        REQUIRE(report.basis_label == z.name());
    }

    // Orthogonal records in a three-level environment.
    const EtaReport clean = decoherence_eta(overlap_state(M_PI / 2.0, 3), z);
    REQUIRE(clean.eta == Catch::Approx(0.0).margin(1e-12));
    REQUIRE(is_recorded(overlap_state(M_PI / 2.0, 3), z, 1e-9));
    REQUIRE_FALSE(is_recorded(overlap_state(0.3, 3), z, 1e-9));
}

TEST_CASE("single-branch and sub-threshold conventions") {
    // One surviving branch: metric is zero regardless of environment detail.
    const StateVector single = spin_up().tensor(random_pure(CompositeSpace({3}), 9));
    REQUIRE(decoherence_eta(single, z_basis()).eta == 0.0);

    // A branch below the weight threshold is ignored even with full overlap.
    const double delta = 1e-10;
    const CompositeSpace space({2, 2});
    Vector amps = Vector::Zero(4);
    amps(0) = std::sqrt(1.0 - delta * delta); // |0>⊗|0>
    amps(2) = delta;                          // |1>⊗|0>, same environment vector
    const EtaReport report = decoherence_eta(StateVector(amps, space), z_basis());
    REQUIRE(report.eta == 0.0);
    REQUIRE(is_recorded(StateVector(amps, space), z_basis(), 1e-9));
}

TEST_CASE("two-factor system bases are supported") {
    const Basis bell = bell_basis();
    const CompositeSpace full({2, 2, 2});
    Vector amps = Vector::Zero(8);
    const Vector phi_plus = bell.columns().col(0);
    const Vector psi_plus = bell.columns().col(2);
    const double inv = 1.0 / std::sqrt(2.0);
    for (int s = 0; s < 4; ++s) {
        amps(2 * s) += inv * phi_plus(s);     // Φ+ branch recorded in env |0>
        amps(2 * s + 1) += inv * psi_plus(s); // Ψ+ branch recorded in env |1>
    }
    const EtaReport report = decoherence_eta(StateVector(amps, full), bell);
    REQUIRE(report.eta == Catch::Approx(0.0).margin(1e-12));
    REQUIRE(report.weights.size() == 4);
    REQUIRE(report.weights[0] == Catch::Approx(inv).margin(1e-12));
    REQUIRE(report.weights[2] == Catch::Approx(inv).margin(1e-12));
    REQUIRE(report.weights[1] == Catch::Approx(0.0).margin(1e-12));
    REQUIRE(report.weights[3] == Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("system-environment split validation") {
    REQUIRE_THROWS_AS(decoherence_eta(spin_up(), z_basis()), std::invalid_argument);
    const StateVector odd = random_pure(CompositeSpace({3, 2}), 14);
    REQUIRE_THROWS_AS(decoherence_eta(odd, z_basis()), std::invalid_argument);
}

TEST_CASE("basis conservation under entangling gates") {
    REQUIRE(is_conserved_basis(cnot(), spin_up(), z_basis(), 1e-9));
    REQUIRE_FALSE(is_conserved_basis(cnot(), spin_up(), x_basis(), 1e-9));

    // Same checks through the callable interface.
    const Operator gate = cnot();
    Evolution ev = [&gate](const StateVector& psi) {
        return StateVector(gate.matrix() * psi.amplitudes(), psi.space());
    };
    REQUIRE(is_conserved_basis(ev, gate.space(), spin_up(), z_basis(), 1e-9));
    REQUIRE_FALSE(is_conserved_basis(ev, gate.space(), spin_up(), x_basis(), 1e-9));

    REQUIRE_FALSE(is_conserved_basis(swap_gate(), spin_up(), z_basis(), 1e-9));
}

TEST_CASE("measurement process classification") {
    const ProcessReport copy = is_measurement_process(cnot(), spin_up(), z_basis());
    REQUIRE(copy.projective);
    REQUIRE(copy.nonselective);
    REQUIRE(copy.witnesses.empty());

    // The same gate does not measure the conjugate basis: a witness appears.
    const ProcessReport conjugate = is_measurement_process(cnot(), spin_up(), x_basis());
    REQUIRE_FALSE(conjugate.nonselective);
    REQUIRE_FALSE(conjugate.projective);
    REQUIRE_FALSE(conjugate.witnesses.empty());
    bool found_unrecorded_probe = false;
    for (const StateVector& w : conjugate.witnesses) {
        const StateVector out(cnot().matrix() * w.tensor(spin_up()).amplitudes(),
                              cnot().space());
        if (!is_recorded(out, x_basis(), 1e-9)) found_unrecorded_probe = true;
    }
    REQUIRE(found_unrecorded_probe);

    // Swapping system and apparatus leaves every input trivially recorded
    // (one branch survives) but does not preserve the basis states.
    const ProcessReport swap_report = is_measurement_process(swap_gate(), spin_up(), z_basis());
    REQUIRE(swap_report.nonselective);
    REQUIRE_FALSE(swap_report.projective);
}
