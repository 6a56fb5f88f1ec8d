#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qlab/measure.hpp"
#include "qlab/random.hpp"

namespace qlab::relcheck {

// Quantifies how far a remote party's marginal statistics move when the other
// party measures first. magnitude is the trace-norm distance between the two
// marginals: 0 means every remote measurement distribution is unchanged, and
// it can never exceed 2 (trace-norm bound for density matrices).
struct ViolationReport {
    double magnitude = 0.0;
    std::optional<Operator> witness_state;
    std::optional<Observable> witness_observable;
    std::optional<Operator> witness_unitary;
};

// Distance between the second subsystem's marginals of U ρ U† and of
// U M(ρ) U†, where M is the nonselective measurement of obsA on the first
// n_alice_factors factors. Zero magnitude means the joint evolution hides the
// measurement from the remote side for this (ρ, U, Â): the marginal fully
// determines all measurement statistics there.
ViolationReport check_mc(const Operator& u, const Observable& obsA, const Operator& rho,
                         int n_alice_factors = 1);

// Same comparison with the measurement generalized to an environment-coupling
// evolution: V acts on (environment ⊗ first subsystem) with the environment
// prepared in rho_e, the environment is traced out, then U runs as before.
ViolationReport check_c(const Operator& v, const Operator& u, const Operator& rho,
                        const Operator& rho_e, int n_alice_factors = 1);

// Nearest Kronecker factorization of a unitary. u1's largest-modulus entry is
// made real positive; u2 absorbs the remaining alignment phase, which is also
// reported. residual below ~1e-9 identifies exact products (up to phase).
struct FactorizationResult {
    Operator u1;
    Operator u2;
    double residual = 0.0;        // ‖U − u1⊗u2‖_F after phase alignment
    double alignment_phase = 0.0; // phase pushed into u2
};

// Block rearrangement of u into a d1²×d2² matrix, dominant singular pair,
// then polar projection of each factor onto the unitary group.
FactorizationResult factorize_unitary(const Operator& u, int d1, int d2);

// Either certifies u as a product (residual < product_tol) or searches random
// full-rank states and rank-1 first-subsystem observables for the strongest
// marginal disturbance, returning the best witness found.
struct WitnessSearchResult {
    bool factorized = false;
    std::optional<ViolationReport> witness;
};
WitnessSearchResult mc_implies_f_witness(const Operator& u, int d1, int d2, int trials,
                                         std::uint64_t seed, double product_tol = 1e-9);

// A finite composition of primitive state transformations: unitary
// conjugation, nonselective measurement, and selective measurement with the
// outcome drawn from the Born distribution (which averages back to the
// nonselective update in ensemble).
class Channel {
public:
    Channel& then_unitary(Operator u);
    Channel& then_nonselective(Observable obs);
    Channel& then_selective_sample(Observable obs);

    // Outcome-averaged action: selective-sample steps act nonselectively.
    Operator apply_ensemble(const Operator& rho) const;
    // One stochastic realization: selective-sample steps collapse to a single
    // Born-drawn outcome.
    Operator apply_sampled(const Operator& rho, Rng& rng) const;

    bool has_sampling_steps() const;

private:
    struct Step {
        enum class Kind { unitary, nonselective, selective_sample } kind;
        std::optional<Operator> u;
        std::optional<Observable> obs;
    };
    std::vector<Step> steps_;
};

// Distinguishability game: a sender encodes one bit by choosing which channel
// acts on the shared state; the receiver measures bob_obs on the trailing
// factors of every one of n_pairs copies and guesses by maximum likelihood
// (fair coin on ties). tv_distance is the total-variation distance between
// the receiver's two outcome distributions; empirical_error is the guess
// error rate over n_rounds independent rounds.
struct GameResult {
    double tv_distance = 0.0;
    double empirical_error = 0.0;
    std::vector<double> dist_bit0;
    std::vector<double> dist_bit1;
};
GameResult signaling_game(const Channel& channel_bit0, const Channel& channel_bit1,
                          const Observable& bob_obs, const Operator& rho0, int n_pairs,
                          int n_rounds, std::uint64_t seed);

} // namespace qlab::relcheck
