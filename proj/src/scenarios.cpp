#include "qlab/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace qlab::scenarios {

namespace {

constexpr double root_half = 0.70710678118654752440;

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(16);
    os << x;
    return os.str();
}

void validate_pointer_dim(int d) {
    if (d < 5 || d % 2 == 0)
        throw std::invalid_argument(
            "pointer dimension must be odd and at least 5 for unambiguous ±2 readout");
}

void validate_two_spin(const StateVector& psi) {
    if (!(psi.space() == CompositeSpace({2, 2})))
        throw std::invalid_argument("initial state must live on two spins");
}

// Momentum-basis change |q⟩ → |p⟩: M[p][q] = ω^{−pq}/√d.
Operator momentum_transform(int d) {
    Matrix m(d, d);
    const double w = 2.0 * M_PI / d;
    for (int p = 0; p < d; ++p)
        for (int q = 0; q < d; ++q) m(p, q) = std::polar(1.0 / std::sqrt(d), -w * p * q);
    return Operator(std::move(m), CompositeSpace::single(d));
}

StateVector two_spin_state(std::initializer_list<cxd> amps) {
    Vector v(4);
    int k = 0;
    for (cxd a : amps) v(k++) = a;
    return StateVector(std::move(v), CompositeSpace({2, 2}));
}

// P(↑ₓ) of the leading qubit of a pure state.
double p_up_x_leading(const StateVector& psi) {
    const int rest = psi.dim() / 2;
    double p = 0.0;
    for (int e = 0; e < rest; ++e)
        p += 0.5 * std::norm(psi.amplitudes()(e) + psi.amplitudes()(rest + e));
    return p;
}

} // namespace

bool ScenarioReport::all_pass() const {
    return std::all_of(quantities.begin(), quantities.end(),
                       [](const Quantity& q) { return q.pass; });
}

void ScenarioReport::check(std::string label, double predicted, double expected,
                           double tolerance) {
    Quantity q{std::move(label), predicted, expected, tolerance,
               std::abs(predicted - expected) <= tolerance};
    quantities.push_back(std::move(q));
}

ScenarioReport coherence_revival(int n_env, bool collapse_model, std::uint64_t seed) {
    if (n_env < 1 || n_env > 12)
        throw std::invalid_argument("coherence_revival: environment size must be in 1..12");

    std::vector<int> dims(static_cast<std::size_t>(n_env) + 1, 2);
    const CompositeSpace space(dims);
    const int env_total = space.total() / 2;

    Vector v0 = Vector::Zero(space.total());
    v0(0) = root_half;         // |↑, ↑…↑⟩
    v0(env_total) = root_half; // |↓, ↑…↑⟩
    StateVector psi(std::move(v0), space);

    const Operator copy_gate = cnot();
    for (int k = 1; k <= n_env; ++k) psi = apply_on_factors(psi, copy_gate, {0, k});

    ScenarioReport report;
    report.name = collapse_model ? "coherence_revival_collapse" : "coherence_revival";
    report.notes.push_back("environment_spins = " + std::to_string(n_env));

    auto run_inverse_chain = [&](StateVector s) {
        for (int k = n_env; k >= 1; --k) s = apply_on_factors(s, copy_gate, {0, k});
        return s;
    };

    if (!collapse_model) {
        const double p = p_up_x_leading(run_inverse_chain(psi));
        report.check("p_up_x", p, 1.0, 1e-12);
        return report;
    }

    // Read the system's z outcome between the chains: split into the two
    // conditional branches, then undo the chain on each.
    Vector up = psi.amplitudes(), down = psi.amplitudes();
    up.tail(env_total).setZero();
    down.head(env_total).setZero();
    const double w_up = up.squaredNorm();
    const double w_down = down.squaredNorm();

    const double p_up_branch = p_up_x_leading(run_inverse_chain(StateVector(up, space)));
    const double p_down_branch =
        p_up_x_leading(run_inverse_chain(StateVector(down, space)));
    const double p_ensemble = w_up * p_up_branch + w_down * p_down_branch;
    report.check("p_up_x_ensemble", p_ensemble, 0.5, 1e-12);

    Rng rng(derive_seed(seed, "revival-collapse"));
    const bool sampled_up = rng.uniform() < w_up;
    report.check("p_up_x_sampled_run", sampled_up ? p_up_branch : p_down_branch, 0.5,
                 1e-12);
    report.notes.push_back(std::string("sampled_z_outcome = ") + (sampled_up ? "up" : "down"));
    return report;
}

namespace {

struct RecordingBasisPair {
    cxd alpha, beta; // first vector (α, β); partner fixed to (β̄, −ᾱ)
    Vector b0() const {
        Vector v(2);
        v << alpha, beta;
        return v;
    }
    Vector b1() const {
        Vector v(2);
        v << std::conj(beta), -std::conj(alpha);
        return v;
    }
};

// Σ_i |b_i⟩⟨b_i| ⊗ shift^i on (qubit, environment); optionally followed by
// the basis swap b_i → b_{1−i} on the qubit (recording without conservation).
Operator recording_coupling(const RecordingBasisPair& basis, int env_dim, bool conserved) {
    const CompositeSpace space({2, env_dim});
    Matrix shift = Matrix::Zero(env_dim, env_dim);
    for (int k = 0; k < env_dim; ++k) shift((k + 1) % env_dim, k) = 1.0;
    const Matrix eye = Matrix::Identity(env_dim, env_dim);

    const Vector b0 = basis.b0(), b1 = basis.b1();
    Matrix u = Matrix::Zero(2 * env_dim, 2 * env_dim);
    auto add_term = [&](const Vector& sys_out, const Vector& sys_in, const Matrix& env) {
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                u.block(i * env_dim, j * env_dim, env_dim, env_dim) +=
                    sys_out(i) * std::conj(sys_in(j)) * env;
    };
    add_term(conserved ? b0 : b1, b0, eye);
    add_term(conserved ? b1 : b0, b1, shift);
    return Operator(std::move(u), space);
}

} // namespace

ScenarioReport bell_recording(const BellRecordingParams& params) {
    const double cnorm = std::sqrt(std::norm(params.c1) + std::norm(params.c2));
    if (cnorm < 1e-12)
        throw std::invalid_argument("bell_recording: c1, c2 cannot both vanish");
    const cxd c1 = params.c1 / cnorm, c2 = params.c2 / cnorm;
    const int e1 = params.env_dim_1, e2 = params.env_dim_2;
    if (e1 < 2 || e2 < 2)
        throw std::invalid_argument("bell_recording: environments need dimension >= 2");

    const RecordingBasisPair B{params.basis_b.columns()(0, 0), params.basis_b.columns()(1, 0)};
    const RecordingBasisPair Bp{params.basis_b_prime.columns()(0, 0),
                                params.basis_b_prime.columns()(1, 0)};

    const CompositeSpace space({2, 2, e1, e2});
    Vector v0 = Vector::Zero(space.total());
    // c₁|↑↓⟩ + c₂|↓↑⟩, both environments in |0⟩.
    v0(space.flatten({0, 1, 0, 0})) = c1;
    v0(space.flatten({1, 0, 0, 0})) = c2;
    StateVector psi(std::move(v0), space);
    const StateVector pair_before = two_spin_state({0.0, c1, c2, 0.0});

    psi = apply_on_factors(psi, recording_coupling(B, e1, params.conserved_couplings),
                           {0, 2});
    psi = apply_on_factors(psi, recording_coupling(Bp, e2, params.conserved_couplings),
                           {1, 3});

    ScenarioReport report;
    report.name = "bell_recording";

    // Branches are labeled by the orthogonal environment record (i, j).
    double weight_total = 0.0;
    int max_rank = 1;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            Vector branch = Vector::Zero(space.total());
            double weight = 0.0;
            for (int s1 = 0; s1 < 2; ++s1)
                for (int s2 = 0; s2 < 2; ++s2) {
                    const int flat = space.flatten({s1, s2, i, j});
                    branch(flat) = psi.amplitudes()(flat);
                    weight += std::norm(branch(flat));
                }
            weight_total += weight;
            BranchInfo info;
            info.label = "branch_" + std::to_string(i) + std::to_string(j);
            info.weight = weight;
            if (weight > 1e-14) {
                // Rank across the (qubit1, env1) | (qubit2, env2) cut.
                const StateVector b(branch, space);
                const StateVector cut_ordered = permute_factors(b, {0, 2, 1, 3});
                info.schmidt_rank = schmidt_rank(cut_ordered, {0, 1});
                info.product_across_cut = info.schmidt_rank == 1;
                max_rank = std::max(max_rank, info.schmidt_rank);
                report.branches.push_back(info);
            }
        }
    report.check("branch_weight_total_dev", std::abs(weight_total - 1.0), 0.0, 1e-12);
    report.check("max_branch_schmidt_rank", max_rank, 1.0, 0.0);

    if (params.conserved_couplings) {
        const cxd a = B.alpha, b = B.beta, ap = Bp.alpha, bp = Bp.beta;
        const cxd expected00 = c1 * std::conj(a) * std::conj(bp) + c2 * std::conj(b) * std::conj(ap);
        const cxd expected01 = -c1 * std::conj(a) * ap + c2 * std::conj(b) * bp;
        const cxd expected10 = c1 * b * std::conj(bp) - c2 * a * std::conj(ap);
        const cxd expected11 = -c1 * b * ap - c2 * a * bp;
        const cxd expected[2][2] = {{expected00, expected01}, {expected10, expected11}};

        const RecordingBasisPair* bases[2] = {&B, &Bp};
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                const Vector s1 = i == 0 ? bases[0]->b0() : bases[0]->b1();
                const Vector s2 = j == 0 ? bases[1]->b0() : bases[1]->b1();
                cxd amp = 0.0;
                for (int k1 = 0; k1 < 2; ++k1)
                    for (int k2 = 0; k2 < 2; ++k2)
                        amp += std::conj(s1(k1) * s2(k2)) *
                               psi.amplitudes()(space.flatten({k1, k2, i, j}));
                report.check("coefficient_dev_" + std::to_string(i) + std::to_string(j),
                             std::abs(amp - expected[i][j]), 0.0, 1e-12);
            }
    }

    const auto before = chsh::chsh_max(pair_before.density(), params.chsh_grid);
    const double best_before = 2.0 * std::sqrt(1.0 + 4.0 * std::norm(c1) * std::norm(c2));
    report.check("chsh_before", before.value, best_before, 1e-6);

    const auto after = chsh::chsh_max(reduced_density(psi, {0, 1}), params.chsh_grid);
    report.check("chsh_after_excess_over_classical", std::max(0.0, after.value - 2.0), 0.0,
                 1e-9);
    report.notes.push_back("chsh_after = " + fmt(after.value));
    return report;
}

ScenarioReport wigner_friend(int variant, const WignerFriendParams& params) {
    ScenarioReport report;
    report.name = "wigner_friend_" + std::to_string(variant);
    const CompositeSpace two({2, 2});

    switch (variant) {
    case 1: {
        const double cn = std::sqrt(std::norm(params.c1) + std::norm(params.c2));
        const double un = std::sqrt(std::norm(params.alpha) + std::norm(params.beta));
        if (cn < 1e-12 || un < 1e-12)
            throw std::invalid_argument("wigner_friend: degenerate parameters");
        const cxd c1 = params.c1 / cn, c2 = params.c2 / cn;
        const cxd alpha = params.alpha / un, beta = params.beta / un;

        StateVector psi =
            apply_on_factors(two_spin_state({c1, 0.0, c2, 0.0}), cnot(), {0, 1});
        // Wigner: Born probability of the u outcome from the global state.
        cxd env_up = 0.0, env_down = 0.0; // (⟨u| ⊗ 1)|Ψ⟩ components
        double p_wigner = 0.0;
        for (int f = 0; f < 2; ++f) {
            const cxd amp = std::conj(alpha) * psi.amplitudes()(0 * 2 + f) +
                            std::conj(beta) * psi.amplitudes()(1 * 2 + f);
            p_wigner += std::norm(amp);
            (f == 0 ? env_up : env_down) = amp;
        }
        // Friend: weighted mixture over the recorded branches.
        double p_friend = 0.0;
        for (int i = 0; i < 2; ++i) {
            double w = 0.0;
            for (int f = 0; f < 2; ++f) w += std::norm(psi.amplitudes()(i * 2 + f));
            p_friend += w * std::norm(i == 0 ? std::conj(alpha) : std::conj(beta));
        }
        const double expected = std::norm(alpha * c1) + std::norm(std::conj(beta) * c2);
        report.check("p_up_u_wigner", p_wigner, expected, 1e-12);
        report.check("p_up_u_friend", p_friend, expected, 1e-12);
        report.check("observer_prediction_gap", std::abs(p_wigner - p_friend), 0.0, 1e-12);
        break;
    }
    case 2: {
        const StateVector start = two_spin_state({root_half, 0.0, root_half, 0.0});
        StateVector psi = apply_on_factors(start, cnot(), {0, 1});
        psi = apply_on_factors(psi, Operator(cnot().matrix().adjoint(), cnot().space()),
                               {0, 1});
        report.check("p_up_x", p_up_x_leading(psi), 1.0, 1e-12);
        const Operator friend_state = reduced_density(psi, {1});
        report.check("friend_memory_reset_fidelity",
                     std::real(friend_state.matrix()(0, 0)), 1.0, 1e-12);
        break;
    }
    case 3: {
        const StateVector start = two_spin_state({root_half, 0.0, root_half, 0.0});
        const StateVector psi = apply_on_factors(start, cnot(), {0, 1});
        const StateVector psi_plus = two_spin_state({root_half, 0.0, 0.0, root_half});
        const Operator proj_plus = psi_plus.density();
        const double p_wigner =
            std::real((Operator(psi.density().matrix(), two) * proj_plus).trace());
        // The friend's (unjustified) collapse replaces the pure state by the
        // z-branch mixture before Wigner's joint measurement.
        const Observable z_on_s =
            spectral_decomposition(tensor_product(sigma_z(), Operator::identity(qubit())));
        const Operator collapsed = measure::nonselective_measure(psi.density(), z_on_s);
        const double p_friend =
            std::real((Operator(collapsed.matrix(), two) * proj_plus).trace());
        report.check("p_psi_plus_wigner", p_wigner, 1.0, 1e-12);
        report.check("p_psi_plus_friend", p_friend, 0.5, 1e-12);
        report.check("prediction_discrepancy", std::abs(p_wigner - p_friend), 0.5, 1e-12);
        break;
    }
    case 4: {
        const Operator rho0 = StateVector::basis_state(qubit(), 0).density();
        const Observable obs_x = spectral_decomposition(sigma_x());
        // Wigner: nonselective x measurement, then the z Born rule.
        const Operator rho1 = measure::nonselective_measure(rho0, obs_x);
        const double p_down_wigner = std::real(rho1.matrix()(1, 1));
        // Friend: explicit branch-by-branch collapse and reweighting.
        double p_down_friend = 0.0;
        for (const auto& pair : obs_x.spectrum()) {
            const auto outcome = measure::selective_measure(rho0, obs_x, pair.value);
            p_down_friend += outcome.probability * std::real(outcome.state.matrix()(1, 1));
        }
        report.check("p_down_wigner", p_down_wigner, 0.5, 1e-12);
        report.check("p_down_friend", p_down_friend, 0.5, 1e-12);
        report.check("observer_prediction_gap", std::abs(p_down_wigner - p_down_friend),
                     0.0, 1e-12);
        break;
    }
    default:
        throw std::invalid_argument("wigner_friend: variant must be 1..4");
    }
    return report;
}

Observable total_spin_squared_observable() {
    const Operator eye = Operator::identity(qubit());
    const std::array<Operator, 3> paulis{sigma_x(), sigma_y(), sigma_z()};
    Operator jsq = Operator::zero(CompositeSpace({2, 2}));
    for (const Operator& s : paulis) {
        const Operator jk = 0.5 * (tensor_product(s, eye) + tensor_product(eye, s));
        jsq = jsq + jk * jk;
    }
    return spectral_decomposition(jsq);
}

Observable total_jz_observable() {
    const Operator eye = Operator::identity(qubit());
    return spectral_decomposition(tensor_product(sigma_z(), eye) +
                                  tensor_product(eye, sigma_z()));
}

Operator z_momentum_kick_coupling(int pointer_dim) {
    validate_pointer_dim(pointer_dim);
    const CompositeSpace space({2, pointer_dim});
    Matrix u = Matrix::Zero(space.total(), space.total());
    const double w = 2.0 * M_PI / pointer_dim;
    for (int s = 0; s < 2; ++s) {
        const int sval = s == 0 ? 1 : -1;
        for (int q = 0; q < pointer_dim; ++q) {
            const int flat = s * pointer_dim + q;
            u(flat, flat) = std::polar(1.0, w * q * sval);
        }
    }
    return Operator(std::move(u), space);
}

Operator x_momentum_kick_coupling(int pointer_dim) {
    const Operator h_lift =
        tensor_product(hadamard(), Operator::identity(CompositeSpace::single(pointer_dim)));
    return h_lift * z_momentum_kick_coupling(pointer_dim) * h_lift;
}

StateVector entangled_pointer_pair(int pointer_dim) {
    validate_pointer_dim(pointer_dim);
    const CompositeSpace space({pointer_dim, pointer_dim});
    Vector v = Vector::Zero(space.total());
    for (int q = 0; q < pointer_dim; ++q)
        v(q * pointer_dim + q) = 1.0 / std::sqrt(pointer_dim);
    return StateVector(std::move(v), space);
}

ScenarioReport aharonov_albert_jz(const StateVector& initial_two_spin, int pointer_dim,
                                  std::uint64_t seed) {
    validate_two_spin(initial_two_spin);
    validate_pointer_dim(pointer_dim);
    const int d = pointer_dim;

    const Operator kick = z_momentum_kick_coupling(d);
    auto couple = [&](const StateVector& spins_with_pointers) {
        StateVector s = apply_on_factors(spins_with_pointers, kick, {0, 2});
        return apply_on_factors(s, kick, {1, 3});
    };
    const StateVector psi0 = initial_two_spin.tensor(entangled_pointer_pair(d));
    const StateVector psi = couple(psi0);

    ScenarioReport report;
    report.name = "aharonov_albert_jz";

    // Total-momentum readout: rotate both pointers to the momentum basis and
    // histogram (p₁ + p₂) mod d.
    const Operator mom = momentum_transform(d);
    StateVector psi_mom = apply_on_factors(psi, mom, {2});
    psi_mom = apply_on_factors(psi_mom, mom, {3});
    std::vector<double> reading(static_cast<std::size_t>(d), 0.0);
    const CompositeSpace& space = psi_mom.space();
    for (int flat = 0; flat < space.total(); ++flat) {
        const std::vector<int> idx = space.unflatten(flat);
        reading[static_cast<std::size_t>((idx[2] + idx[3]) % d)] +=
            std::norm(psi_mom.amplitudes()(flat));
    }

    const Observable jz = total_jz_observable();
    const Operator rho_spins(initial_two_spin.density().matrix(), CompositeSpace({2, 2}));
    double mapped_total = 0.0;
    std::vector<bool> used(static_cast<std::size_t>(d), false);
    for (const auto& pair : jz.spectrum()) {
        const int v = static_cast<int>(std::lround(pair.value));
        const int k = ((v % d) + d) % d;
        const double born =
            std::real((rho_spins * Operator(pair.projector.matrix(), CompositeSpace({2, 2})))
                          .trace());
        std::string label = v < 0 ? "p_jz_minus" + std::to_string(-v)
                                  : "p_jz_plus" + std::to_string(v);
        if (v == 0) label = "p_jz_zero";
        report.check(label, reading[static_cast<std::size_t>(k)], born, 1e-12);
        mapped_total += reading[static_cast<std::size_t>(k)];
        used[static_cast<std::size_t>(k)] = true;
    }
    report.check("momentum_prob_outside_spectrum", 1.0 - mapped_total, 0.0, 1e-12);

    // Coherence within a single J_z eigenspace survives the readout.
    const Operator reduced = reduced_density(psi, {0, 1});
    const Operator dephased = measure::nonselective_measure(rho_spins, jz);
    report.check("reduced_state_equals_jz_dephasing",
                 (Operator(reduced.matrix(), CompositeSpace({2, 2})) - dephased).trace_norm(),
                 0.0, 1e-10);
    double max_born = 0.0;
    for (const auto& pair : jz.spectrum())
        max_born = std::max(max_born, std::real((rho_spins * pair.projector).trace()));
    if (max_born > 1.0 - 1e-12) {
        const double fid = std::real(
            (initial_two_spin.amplitudes().adjoint() * reduced.matrix() *
             initial_two_spin.amplitudes())(0));
        report.check("eigenspace_coherence_fidelity", fid, 1.0, 1e-10);
    }

    // A local unitary on spin 1 cannot move the (spin 2, pointer 2) marginal.
    const Operator w = random_unitary(qubit(), derive_seed(seed, "alice-local"));
    const StateVector psi_w = couple(apply_on_factors(psi0, w, {0}));
    const double marginal_dist =
        (reduced_density(psi_w, {1, 3}) - reduced_density(psi, {1, 3})).trace_norm();
    report.check("alice_unitary_bob_marginal_distance", marginal_dist, 0.0, 1e-10);

    for (int k = 0; k < d; ++k)
        if (reading[static_cast<std::size_t>(k)] > 1e-15)
            report.notes.push_back("momentum_reading_" + std::to_string(k) + " = " +
                                   fmt(reading[static_cast<std::size_t>(k)]));
    return report;
}

namespace {

// Shared with jsq_signaling: the fully local two-pointer implementation of
// the Jˣ-then-Jᶻ readout on (spin1, spin2, xptr1, xptr2, zptr1, zptr2).
struct LocalReadout {
    CompositeSpace space;
    Operator x_kick, z_kick;
    StateVector e0; // both pointer pairs

    explicit LocalReadout(int d)
        : space({2, 2, d, d, d, d}),
          x_kick(x_momentum_kick_coupling(d)),
          z_kick(z_momentum_kick_coupling(d)),
          e0(entangled_pointer_pair(d).tensor(entangled_pointer_pair(d))) {}

    StateVector evolve(const StateVector& full) const {
        StateVector s = apply_on_factors(full, x_kick, {0, 2});
        s = apply_on_factors(s, x_kick, {1, 3});
        s = apply_on_factors(s, z_kick, {0, 4});
        return apply_on_factors(s, z_kick, {1, 5});
    }

    StateVector run(const StateVector& two_spin) const {
        return evolve(two_spin.tensor(e0));
    }
};

} // namespace

ScenarioReport jsq_signaling(int n_pairs, int n_rounds, std::uint64_t seed) {
    const CompositeSpace two({2, 2});
    const Observable jsq = total_spin_squared_observable();
    const Operator rho0 = two_spin_state({1.0, 0.0, 0.0, 0.0}).density();
    const Operator flip1 = tensor_product(sigma_x(), Operator::identity(qubit()));

    relcheck::Channel bit0, bit1;
    bit0.then_selective_sample(jsq);
    bit1.then_unitary(flip1).then_selective_sample(jsq);
    const Observable bob_obs = spectral_decomposition(sigma_z());

    const auto game = relcheck::signaling_game(bit0, bit1, bob_obs, rho0, n_pairs,
                                               n_rounds, derive_seed(seed, "jsq-game"));

    ScenarioReport report;
    report.name = "jsq_signaling";
    // spectrum ascending: index 0 ↔ outcome −1 (↓), index 1 ↔ +1 (↑).
    report.check("bob_p_up_bit0", game.dist_bit0[1], 1.0, 1e-12);
    report.check("bob_p_up_bit1", game.dist_bit1[1], 0.5, 1e-12);
    report.check("tv_distance", game.tv_distance, 0.5, 1e-12);
    report.check("ml_error", game.empirical_error, 0.0, 0.01);
    report.notes.push_back("n_pairs = " + std::to_string(n_pairs) +
                           ", n_rounds = " + std::to_string(n_rounds));
    for (int small : {1, 10}) {
        const auto g = relcheck::signaling_game(
            bit0, bit1, bob_obs, rho0, small, n_rounds,
            derive_seed(seed, "jsq-game-small-" + std::to_string(small)));
        report.notes.push_back("ml_error_at_n_pairs_" + std::to_string(small) + " = " +
                               fmt(g.empirical_error));
    }

    // The local implementation of the same readout cannot signal: Bob's full
    // marginal (his spin and his pointer halves) is untouched by Alice's flip.
    const LocalReadout local(5);
    const StateVector up_up = two_spin_state({1.0, 0.0, 0.0, 0.0});
    const StateVector out0 = local.run(up_up);
    const StateVector out1 = local.run(apply_on_factors(up_up, sigma_x(), {0}));
    const double dist =
        (reduced_density(out1, {1, 3, 5}) - reduced_density(out0, {1, 3, 5})).trace_norm();
    report.check("local_readout_bob_marginal_distance", dist, 0.0, 1e-10);
    return report;
}

ScenarioReport jx_then_jz_split(const StateVector& initial_two_spin, int pointer_dim,
                                std::uint64_t seed, int sample_count) {
    validate_two_spin(initial_two_spin);
    validate_pointer_dim(pointer_dim);
    const LocalReadout local(pointer_dim);
    const Basis refinement = total_spin_refinement_basis();

    ScenarioReport report;
    report.name = "jx_then_jz_split";

    const measure::Evolution evo = [&local](const StateVector& s) {
        return local.evolve(s);
    };
    const auto process = measure::is_measurement_process(
        evo, local.space, local.e0, refinement, 1e-10, sample_count,
        derive_seed(seed, "split-probes"));
    report.check("histories_split_for_all_probes", process.nonselective ? 1.0 : 0.0, 1.0,
                 0.0);
    report.check("refinement_basis_conserved", process.projective ? 1.0 : 0.0, 0.0, 0.0);

    // Direct worst-case η over the structured probe set.
    std::vector<StateVector> probes;
    for (int i = 0; i < refinement.size(); ++i) probes.push_back(refinement.vector(i));
    const cxd phases[4] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
    for (int i = 0; i < refinement.size(); ++i)
        for (int j = i + 1; j < refinement.size(); ++j)
            for (const cxd& ph : phases)
                probes.emplace_back(
                    Vector(refinement.columns().col(i) + ph * refinement.columns().col(j)),
                    CompositeSpace({2, 2}));
    for (int k = 0; k < sample_count; ++k)
        probes.push_back(random_pure(CompositeSpace({2, 2}),
                                     derive_seed(seed, "split-eta-" + std::to_string(k))));
    double max_eta = 0.0;
    for (const StateVector& probe : probes)
        max_eta = std::max(
            max_eta, measure::decoherence_eta(local.run(probe), refinement).eta);
    report.check("max_probe_eta", max_eta, 0.0, 1e-10);

    // The singlet is conserved; |↑↑⟩ is recorded but altered.
    auto conservation_deficit = [&](const StateVector& spin_state) {
        const Operator reduced = reduced_density(local.run(spin_state), {0, 1});
        return 1.0 - std::real((spin_state.amplitudes().adjoint() * reduced.matrix() *
                                spin_state.amplitudes())(0));
    };
    report.check("singlet_conservation_deficit", conservation_deficit(refinement.vector(3)),
                 0.0, 1e-12);
    report.check("up_up_conservation_deficit", conservation_deficit(refinement.vector(0)),
                 0.625, 1e-12);

    // Branch structure of the supplied initial state.
    const StateVector out = local.run(initial_two_spin);
    const auto eta = measure::decoherence_eta(out, refinement);
    report.check("initial_state_eta", eta.eta, 0.0, 1e-10);
    const char* labels[4] = {"up_up", "down_down", "triplet_zero", "singlet"};
    for (int i = 0; i < 4; ++i) {
        BranchInfo info;
        info.label = labels[i];
        info.weight = eta.weights[static_cast<std::size_t>(i)] *
                      eta.weights[static_cast<std::size_t>(i)];
        if (info.weight > 1e-14) {
            // Branch extracted by projecting the spins onto the basis vector;
            // rank measured across the Alice | Bob locality cut.
            // (|B_i⟩⟨B_i| ⊗ 1)|out⟩, computed factor-slice by factor-slice.
            Vector branch = Vector::Zero(out.dim());
            const Vector col = refinement.columns().col(i);
            const int env_total = out.dim() / 4;
            for (int e = 0; e < env_total; ++e) {
                cxd proj = 0.0;
                for (int sp = 0; sp < 4; ++sp)
                    proj += std::conj(col(sp)) * out.amplitudes()(sp * env_total + e);
                for (int s = 0; s < 4; ++s) branch(s * env_total + e) = col(s) * proj;
            }
            const StateVector branch_state(branch, out.space());
            const StateVector cut =
                permute_factors(branch_state, {0, 2, 4, 1, 3, 5});
            info.schmidt_rank = schmidt_rank(cut, {0, 1, 2});
            info.product_across_cut = info.schmidt_rank == 1;
        }
        report.branches.push_back(info);
    }
    return report;
}

ScenarioReport jx_then_jz_split_default(int pointer_dim, std::uint64_t seed) {
    return jx_then_jz_split(total_spin_refinement_basis().vector(3), pointer_dim, seed);
}

} // namespace qlab::scenarios
