#include "qlab/relcheck.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <string>

namespace qlab::relcheck {

namespace {

std::vector<int> leading_factors(int n) {
    std::vector<int> f(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) f[static_cast<std::size_t>(i)] = i;
    return f;
}

std::vector<int> trailing_factors(const CompositeSpace& space, int from) {
    std::vector<int> f;
    for (int i = from; i < space.factor_count(); ++i) f.push_back(i);
    return f;
}

// Nonselective measurement of obsA on the leading factors of rho's space.
Operator measure_first_subsystem(const Operator& rho, const Observable& obsA,
                                 int n_alice_factors) {
    const CompositeSpace& space = rho.space();
    if (n_alice_factors < 1 || n_alice_factors >= space.factor_count())
        throw std::invalid_argument("check: alice factor split out of range");
    const CompositeSpace alice = space.subspace(leading_factors(n_alice_factors));
    if (!(obsA.op().space() == alice))
        throw std::invalid_argument("check: observable space does not match first subsystem");
    const CompositeSpace bob = space.subspace(trailing_factors(space, n_alice_factors));
    const Operator one_bob = Operator::identity(bob);
    Matrix out = Matrix::Zero(rho.dim(), rho.dim());
    for (const auto& pair : obsA.spectrum()) {
        const Operator lifted = tensor_product(pair.projector, one_bob);
        out += lifted.matrix() * rho.matrix() * lifted.matrix();
    }
    return Operator(std::move(out), space);
}

double bob_marginal_distance(const Operator& u, const Operator& rho_a, const Operator& rho_b,
                             int n_alice_factors) {
    const std::vector<int> bob = trailing_factors(rho_a.space(), n_alice_factors);
    const Matrix& um = u.matrix();
    const Operator ma(um * rho_a.matrix() * um.adjoint(), rho_a.space());
    const Operator mb(um * rho_b.matrix() * um.adjoint(), rho_b.space());
    return (partial_trace(ma, bob) - partial_trace(mb, bob)).trace_norm();
}

} // namespace

ViolationReport check_mc(const Operator& u, const Observable& obsA, const Operator& rho,
                         int n_alice_factors) {
    if (!(u.space() == rho.space()))
        throw std::invalid_argument("check_mc: unitary and state spaces differ");
    const Operator measured = measure_first_subsystem(rho, obsA, n_alice_factors);
    ViolationReport report;
    report.magnitude = bob_marginal_distance(u, measured, rho, n_alice_factors);
    report.witness_state = rho;
    report.witness_observable = obsA;
    report.witness_unitary = u;
    return report;
}

ViolationReport check_c(const Operator& v, const Operator& u, const Operator& rho,
                        const Operator& rho_e, int n_alice_factors) {
    const CompositeSpace& space = rho.space();
    if (!(u.space() == space))
        throw std::invalid_argument("check_c: unitary and state spaces differ");
    const CompositeSpace alice = space.subspace(leading_factors(n_alice_factors));
    const CompositeSpace expected_v_space = rho_e.space().tensor(alice);
    if (!(v.space() == expected_v_space))
        throw std::invalid_argument("check_c: V must act on environment ⊗ first subsystem");
    const CompositeSpace bob = space.subspace(trailing_factors(space, n_alice_factors));

    // (V ⊗ 1_bob)(ρ_E ⊗ ρ)(V ⊗ 1_bob)†, then trace out the environment.
    const Operator joint = tensor_product(rho_e, rho);
    const Operator v_lift = tensor_product(v, Operator::identity(bob));
    const Matrix evolved =
        v_lift.matrix() * joint.matrix() * v_lift.matrix().adjoint();
    const int n_env = rho_e.space().factor_count();
    std::vector<int> keep;
    for (int f = n_env; f < joint.space().factor_count(); ++f) keep.push_back(f);
    const Operator after_env =
        partial_trace(Operator(evolved, joint.space()), keep);
    // after_env lives on alice ⊗ bob factor dims; rebuild on rho's space so
    // the marginal comparison below uses the original factor bookkeeping.
    const Operator sigma(after_env.matrix(), space);

    ViolationReport report;
    report.magnitude = bob_marginal_distance(u, sigma, rho, n_alice_factors);
    report.witness_state = rho;
    report.witness_unitary = u;
    return report;
}

FactorizationResult factorize_unitary(const Operator& u, int d1, int d2) {
    if (d1 < 1 || d2 < 1 || d1 * d2 != u.dim())
        throw std::invalid_argument("factorize_unitary: split does not match dimension");

    // Rearrange: R[(i1,j1),(i2,j2)] = U[i1·d2+i2, j1·d2+j2]. A Kronecker
    // product rearranges to the rank-1 matrix vec(U1)·vec(U2)ᵀ.
    Matrix r(d1 * d1, d2 * d2);
    for (int i1 = 0; i1 < d1; ++i1)
        for (int j1 = 0; j1 < d1; ++j1)
            for (int i2 = 0; i2 < d2; ++i2)
                for (int j2 = 0; j2 < d2; ++j2)
                    r(i1 * d1 + j1, i2 * d2 + j2) =
                        u.matrix()(i1 * d2 + i2, j1 * d2 + j2);

    Eigen::JacobiSVD<Matrix> svd(r, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const double s0 = svd.singularValues()(0);
    const Vector va = std::sqrt(s0) * svd.matrixU().col(0);
    const Vector vb = std::sqrt(s0) * svd.matrixV().col(0).conjugate();

    Matrix a(d1, d1), b(d2, d2);
    for (int i1 = 0; i1 < d1; ++i1)
        for (int j1 = 0; j1 < d1; ++j1) a(i1, j1) = va(i1 * d1 + j1);
    for (int i2 = 0; i2 < d2; ++i2)
        for (int j2 = 0; j2 < d2; ++j2) b(i2, j2) = vb(i2 * d2 + j2);

    // Polar projection onto the unitary group: X = W Σ Z† → W Z†.
    auto polar_unitary = [](const Matrix& x) {
        Eigen::JacobiSVD<Matrix> s(x, Eigen::ComputeFullU | Eigen::ComputeFullV);
        return Matrix(s.matrixU() * s.matrixV().adjoint());
    };
    Matrix u1 = polar_unitary(a);
    Matrix u2 = polar_unitary(b);

    // u1's largest-modulus entry made real positive.
    Eigen::Index mi = 0, mj = 0;
    u1.cwiseAbs().maxCoeff(&mi, &mj);
    u1 *= std::polar(1.0, -std::arg(u1(mi, mj)));

    const CompositeSpace s1 = CompositeSpace::single(d1);
    const CompositeSpace s2 = CompositeSpace::single(d2);
    // Alignment phase pushed into u2: φ = arg tr((u1⊗u2)† U).
    const Operator candidate = tensor_product(Operator(u1, s1), Operator(u2, s2));
    const double phi = std::arg((candidate.matrix().adjoint() * u.matrix()).trace());
    u2 *= std::polar(1.0, phi);

    FactorizationResult result{Operator(u1, s1), Operator(u2, s2), 0.0, phi};
    const Operator aligned = tensor_product(result.u1, result.u2);
    result.residual = (u.matrix() - aligned.matrix()).norm();
    return result;
}

WitnessSearchResult mc_implies_f_witness(const Operator& u, int d1, int d2, int trials,
                                         std::uint64_t seed, double product_tol) {
    WitnessSearchResult result;
    if (factorize_unitary(u, d1, d2).residual < product_tol) {
        result.factorized = true;
        return result;
    }
    const CompositeSpace split({d1, d2});
    const Operator u_split(u.matrix(), split);
    const CompositeSpace alice = CompositeSpace::single(d1);
    ViolationReport best;
    for (int t = 0; t < trials; ++t) {
        // Full-rank states and rank-1 projective observables maximize the
        // sensitivity of the marginal comparison.
        const Operator rho = random_density(
            split, split.total(), derive_seed(seed, "witness-rho-" + std::to_string(t)));
        const StateVector probe =
            random_pure(alice, derive_seed(seed, "witness-obs-" + std::to_string(t)));
        const Observable obsA = spectral_decomposition(probe.density());
        ViolationReport report = check_mc(u_split, obsA, rho);
        if (report.magnitude > best.magnitude) best = std::move(report);
    }
    result.witness = std::move(best);
    return result;
}

Channel& Channel::then_unitary(Operator u) {
    steps_.push_back({Step::Kind::unitary, std::move(u), std::nullopt});
    return *this;
}

Channel& Channel::then_nonselective(Observable obs) {
    steps_.push_back({Step::Kind::nonselective, std::nullopt, std::move(obs)});
    return *this;
}

Channel& Channel::then_selective_sample(Observable obs) {
    steps_.push_back({Step::Kind::selective_sample, std::nullopt, std::move(obs)});
    return *this;
}

bool Channel::has_sampling_steps() const {
    for (const Step& s : steps_)
        if (s.kind == Step::Kind::selective_sample) return true;
    return false;
}

Operator Channel::apply_ensemble(const Operator& rho) const {
    Operator state = rho;
    for (const Step& s : steps_) {
        switch (s.kind) {
        case Step::Kind::unitary:
            state = Operator(s.u->matrix() * state.matrix() * s.u->matrix().adjoint(),
                             state.space());
            break;
        case Step::Kind::nonselective:
        case Step::Kind::selective_sample:
            state = measure::nonselective_measure(state, *s.obs);
            break;
        }
    }
    return state;
}

Operator Channel::apply_sampled(const Operator& rho, Rng& rng) const {
    Operator state = rho;
    for (const Step& s : steps_) {
        switch (s.kind) {
        case Step::Kind::unitary:
            state = Operator(s.u->matrix() * state.matrix() * s.u->matrix().adjoint(),
                             state.space());
            break;
        case Step::Kind::nonselective:
            state = measure::nonselective_measure(state, *s.obs);
            break;
        case Step::Kind::selective_sample: {
            // Draw an outcome from the Born distribution, then collapse.
            const auto& spectrum = s.obs->spectrum();
            double u01 = rng.uniform();
            std::size_t pick = spectrum.size() - 1;
            for (std::size_t k = 0; k < spectrum.size(); ++k) {
                const double p = std::real(
                    (state.matrix() * spectrum[k].projector.matrix()).trace());
                if (u01 < p) {
                    pick = k;
                    break;
                }
                u01 -= p;
            }
            state = measure::selective_measure(state, *s.obs, spectrum[pick].value).state;
            break;
        }
        }
    }
    return state;
}

GameResult signaling_game(const Channel& channel_bit0, const Channel& channel_bit1,
                          const Observable& bob_obs, const Operator& rho0, int n_pairs,
                          int n_rounds, std::uint64_t seed) {
    const CompositeSpace& space = rho0.space();
    // Bob owns the trailing factors that realize the observable's space.
    const int nf = space.factor_count();
    const int nb = bob_obs.op().space().factor_count();
    if (nb >= nf)
        throw std::invalid_argument("signaling_game: no sender factors left");
    std::vector<int> bob_factors;
    for (int f = nf - nb; f < nf; ++f) bob_factors.push_back(f);
    if (!(space.subspace(bob_factors) == bob_obs.op().space()))
        throw std::invalid_argument("signaling_game: observable does not match trailing factors");

    auto bob_distribution = [&](const Operator& rho) {
        const Operator rho_b = partial_trace(rho, bob_factors);
        std::vector<double> dist;
        for (const auto& pair : bob_obs.spectrum())
            dist.push_back(std::max(
                0.0, std::real((rho_b.matrix() * pair.projector.matrix()).trace())));
        return dist;
    };

    GameResult result;
    result.dist_bit0 = bob_distribution(channel_bit0.apply_ensemble(rho0));
    result.dist_bit1 = bob_distribution(channel_bit1.apply_ensemble(rho0));
    double tv = 0.0;
    for (std::size_t k = 0; k < result.dist_bit0.size(); ++k)
        tv += std::abs(result.dist_bit0[k] - result.dist_bit1[k]);
    result.tv_distance = 0.5 * tv;

    // Log-likelihoods; impossible outcomes get a large finite penalty so the
    // arithmetic stays NaN-free.
    auto log_or_floor = [](double p) { return p > 0.0 ? std::log(p) : -1e30; };

    int errors = 0;
    for (int round = 0; round < n_rounds; ++round) {
        Rng rng(derive_seed(seed, "signal-round-" + std::to_string(round)));
        const int true_bit = rng.uniform() < 0.5 ? 0 : 1;
        const Channel& channel = true_bit == 0 ? channel_bit0 : channel_bit1;

        double loglik0 = 0.0, loglik1 = 0.0;
        for (int copy = 0; copy < n_pairs; ++copy) {
            const Operator out = channel.has_sampling_steps()
                                     ? channel.apply_sampled(rho0, rng)
                                     : channel.apply_ensemble(rho0);
            const std::vector<double> dist = bob_distribution(out);
            // Sample Bob's outcome for this copy.
            double u01 = rng.uniform();
            std::size_t y = dist.size() - 1;
            for (std::size_t k = 0; k < dist.size(); ++k) {
                if (u01 < dist[k]) {
                    y = k;
                    break;
                }
                u01 -= dist[k];
            }
            loglik0 += log_or_floor(result.dist_bit0[y]);
            loglik1 += log_or_floor(result.dist_bit1[y]);
        }
        int guess;
        if (std::abs(loglik0 - loglik1) <= 1e-9)
            guess = rng.uniform() < 0.5 ? 0 : 1; // tie: fair coin
        else
            guess = loglik0 > loglik1 ? 0 : 1;
        if (guess != true_bit) ++errors;
    }
    result.empirical_error = static_cast<double>(errors) / n_rounds;
    return result;
}

} // namespace qlab::relcheck
