#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "qlab/basis.hpp"
#include "qlab/qubits.hpp"
#include "qlab/random.hpp"
#include "qlab/relcheck.hpp"

using namespace qlab;
using namespace qlab::relcheck;

namespace {

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

Observable random_observable(const CompositeSpace& space, std::uint64_t seed) {
    Rng rng(seed);
    Matrix g(space.total(), space.total());
    for (int r = 0; r < space.total(); ++r)
        for (int c = 0; c < space.total(); ++c) g(r, c) = rng.complex_gaussian();
    return spectral_decomposition(Operator(0.5 * (g + g.adjoint().eval()), space));
}

} // namespace

TEST_CASE("product evolutions hide first-party measurements") {
    const CompositeSpace alice({3});
    const CompositeSpace bob({2});
    for (int i = 0; i < 10; ++i) {
        const Operator u = tensor_product(random_unitary(alice, 100 + i),
                                          random_unitary(bob, 200 + i));
        const Observable obsA = random_observable(alice, 300 + i);
        const Operator rho = random_density(alice.tensor(bob), 6, 400 + i);
        REQUIRE(check_mc(u, obsA, rho).magnitude < 1e-12);
    }
}

TEST_CASE("multi-factor first party is supported") {
    const CompositeSpace alice({2, 2});
    const CompositeSpace bob({3});
    const Operator u =
        tensor_product(random_unitary(alice, 71), random_unitary(bob, 72));
    const Observable obsA = random_observable(alice, 73);
    const Operator rho = random_density(alice.tensor(bob), 12, 74);
    REQUIRE(check_mc(u, obsA, rho, 2).magnitude < 1e-12);
}

TEST_CASE("entangling evolutions expose first-party measurements") {
    // Joint state Φ+, first party dephased in x, then a copy gate: the remote
    // marginal moves from a pure pointer state to maximally mixed.
    const ViolationReport cnot_case =
        check_mc(cnot(), spectral_decomposition(sigma_x()), bell_basis().vector(0).density());
    REQUIRE(cnot_case.magnitude == Catch::Approx(1.0).margin(1e-12));
    REQUIRE(cnot_case.witness_state.has_value());
    REQUIRE(cnot_case.witness_observable.has_value());
    REQUIRE(cnot_case.witness_unitary.has_value());

    // Swap ships the dephasing across the cut directly.
    const Operator plus_zero = spin_up_x().tensor(spin_up()).density();
    REQUIRE(check_mc(swap_gate(), spectral_decomposition(sigma_z()), plus_zero).magnitude ==
            Catch::Approx(1.0).margin(1e-12));

    const Operator rho_bad = random_density(CompositeSpace({3}), 3, 5);
    REQUIRE_THROWS_AS(check_mc(cnot(), spectral_decomposition(sigma_z()), rho_bad),
                      std::invalid_argument);
}

TEST_CASE("environment-coupling generalization") {
    const CompositeSpace env_alice({2, 2});
    const Operator rho_e = spin_up().density();
    const Operator phi_plus = bell_basis().vector(0).density();

    // Idle coupling: nothing happens on the first party, marginals agree.
    REQUIRE(check_c(Operator::identity(env_alice), cnot(), phi_plus, rho_e).magnitude < 1e-12);

    // Swapping the first party into the environment erases the correlations
    // the later copy gate would have used.
    REQUIRE(check_c(swap_gate(), cnot(), phi_plus, rho_e).magnitude ==
            Catch::Approx(1.0).margin(1e-12));

    // Any trace-preserving local disturbance stays invisible under a product.
    const Operator u_prod =
        tensor_product(random_unitary(CompositeSpace({2}), 61),
                       random_unitary(CompositeSpace({2}), 62));
    const Operator rho = random_density(CompositeSpace({2, 2}), 4, 63);
    REQUIRE(check_c(cnot(), u_prod, rho, rho_e).magnitude < 1e-12);
}

TEST_CASE("nearest Kronecker factorization recovers planted products") {
    for (int i = 0; i < 8; ++i) {
        const Operator a = random_unitary(CompositeSpace({3}), 500 + i);
        const Operator b = random_unitary(CompositeSpace({2}), 600 + i);
        const cxd phase = std::polar(1.0, 0.3 + 0.5 * i);
        const Operator u = phase * tensor_product(a, b);

        const FactorizationResult f = factorize_unitary(u, 3, 2);
        REQUIRE(f.residual < 1e-12);
        REQUIRE(f.u1.is_unitary(1e-12));
        REQUIRE(f.u2.is_unitary(1e-12));
        REQUIRE(max_abs((tensor_product(f.u1, f.u2) - u).matrix()) < 1e-12);

        // Canonical gauge: the first factor's largest entry is real positive.
        Eigen::Index r = 0, c = 0;
        f.u1.matrix().cwiseAbs().maxCoeff(&r, &c);
        const cxd top = f.u1.matrix()(r, c);
        REQUIRE(top.real() > 0.0);
        REQUIRE(std::abs(top.imag()) < 1e-12);
    }
}

TEST_CASE("entangling gates are far from every product") {
    REQUIRE(factorize_unitary(cnot(), 2, 2).residual > 0.5);
    REQUIRE(factorize_unitary(swap_gate(), 2, 2).residual > 0.5);
    REQUIRE_THROWS_AS(factorize_unitary(cnot(), 3, 2), std::invalid_argument);
}

TEST_CASE("witness search certifies products and indicts the rest") {
    const Operator u_prod = tensor_product(random_unitary(CompositeSpace({2}), 81),
                                           random_unitary(CompositeSpace({2}), 82));
    const WitnessSearchResult certified = mc_implies_f_witness(u_prod, 2, 2, 20, 83);
    REQUIRE(certified.factorized);
    REQUIRE_FALSE(certified.witness.has_value());

    const WitnessSearchResult indicted = mc_implies_f_witness(cnot(), 2, 2, 50, 84);
    REQUIRE_FALSE(indicted.factorized);
    REQUIRE(indicted.witness.has_value());
    REQUIRE(indicted.witness->magnitude > 1e-3);
    REQUIRE(indicted.witness->witness_state.has_value());
    REQUIRE(indicted.witness->witness_unitary.has_value());

    // The recorded witness must reproduce its own magnitude.
    const ViolationReport replay =
        check_mc(*indicted.witness->witness_unitary, *indicted.witness->witness_observable,
                 *indicted.witness->witness_state);
    REQUIRE(replay.magnitude == Catch::Approx(indicted.witness->magnitude).margin(1e-12));
}

TEST_CASE("channel composition and averaging") {
    const Operator rho0 = spin_up().density();
    REQUIRE(max_abs((Channel().apply_ensemble(rho0) - rho0).matrix()) == 0.0);
    REQUIRE_FALSE(Channel().has_sampling_steps());

    Channel hz;
    hz.then_unitary(hadamard()).then_unitary(sigma_z());
    Channel zh;
    zh.then_unitary(sigma_z()).then_unitary(hadamard());
    REQUIRE(max_abs((hz.apply_ensemble(rho0) - spin_down_x().density()).matrix()) < 1e-14);
    REQUIRE(max_abs((zh.apply_ensemble(rho0) - spin_up_x().density()).matrix()) < 1e-14);

    Channel sampler;
    sampler.then_selective_sample(spectral_decomposition(sigma_z()));
    REQUIRE(sampler.has_sampling_steps());
    const Operator plus = spin_up_x().density();
    REQUIRE(max_abs((sampler.apply_ensemble(plus) - 0.5 * Operator::identity(qubit())).matrix()) <
            1e-14);

    // Each stochastic realization collapses; the empirical mean matches the
    // ensemble action.
    Rng rng(90);
    Matrix mean = Matrix::Zero(2, 2);
    const int draws = 2000;
    for (int i = 0; i < draws; ++i) {
        const Operator out = sampler.apply_sampled(plus, rng);
        REQUIRE(out.is_density());
        REQUIRE(std::abs(out.matrix()(0, 1)) < 1e-14); // collapsed to a pointer state
        mean += out.matrix() / draws;
    }
    REQUIRE(max_abs(mean - 0.5 * Matrix::Identity(2, 2)) < 0.05);

    // Without sampling steps both application modes agree exactly.
    REQUIRE(max_abs((hz.apply_sampled(rho0, rng) - hz.apply_ensemble(rho0)).matrix()) == 0.0);
}

TEST_CASE("distinguishability game mechanics") {
    const Operator rho00 = spin_up().tensor(spin_up()).density();
    const Observable bob_z = spectral_decomposition(sigma_z());

    Channel idle;
    Channel flip_bob;
    flip_bob.then_unitary(tensor_product(Operator::identity(qubit()), sigma_x()));

    const GameResult loud = signaling_game(idle, flip_bob, bob_z, rho00, 3, 50, 17);
    REQUIRE(loud.dist_bit0.size() == 2);
    // Distributions are indexed by ascending outcome: (-1, +1).
    REQUIRE(loud.dist_bit0[0] == Catch::Approx(0.0).margin(1e-14));
    REQUIRE(loud.dist_bit0[1] == Catch::Approx(1.0).margin(1e-14));
    REQUIRE(loud.dist_bit1[0] == Catch::Approx(1.0).margin(1e-14));
    REQUIRE(loud.tv_distance == Catch::Approx(1.0).margin(1e-14));
    REQUIRE(loud.empirical_error == 0.0);

    const GameResult silent = signaling_game(idle, idle, bob_z, rho00, 3, 400, 18);
    REQUIRE(silent.tv_distance < 1e-14);
    REQUIRE(std::abs(silent.empirical_error - 0.5) < 0.125);
}
