#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <sstream>

#include "qlab/basis.hpp"
#include "qlab/observable.hpp"
#include "qlab/operator.hpp"
#include "qlab/qubits.hpp"
#include "qlab/random.hpp"
#include "qlab/serialize.hpp"
#include "qlab/state_vector.hpp"

using namespace qlab;

namespace {

// Independent reference partial trace: explicit sums over the traced factors,
// sharing no code with the library implementation.
Matrix brute_partial_trace(const Operator& rho, const std::vector<int>& keep) {
    const CompositeSpace& space = rho.space();
    std::vector<int> traced;
    for (int f = 0; f < space.factor_count(); ++f)
        if (std::find(keep.begin(), keep.end(), f) == keep.end()) traced.push_back(f);
    const CompositeSpace out_space = space.subspace(keep);
    Matrix out = Matrix::Zero(out_space.total(), out_space.total());
    for (int row = 0; row < space.total(); ++row) {
        const auto ridx = space.unflatten(row);
        for (int col = 0; col < space.total(); ++col) {
            const auto cidx = space.unflatten(col);
            bool diagonal_on_traced = true;
            for (int f : traced)
                if (ridx[static_cast<std::size_t>(f)] != cidx[static_cast<std::size_t>(f)])
                    diagonal_on_traced = false;
            if (!diagonal_on_traced) continue;
            std::vector<int> rkeep, ckeep;
            for (int f : keep) {
                rkeep.push_back(ridx[static_cast<std::size_t>(f)]);
                ckeep.push_back(cidx[static_cast<std::size_t>(f)]);
            }
            out(out_space.flatten(rkeep), out_space.flatten(ckeep)) += rho.matrix()(row, col);
        }
    }
    return out;
}

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

} // namespace

TEST_CASE("composite space index arithmetic") {
    const CompositeSpace space({2, 3, 4});
    REQUIRE(space.total() == 24);
    REQUIRE(space.factor_count() == 3);
    REQUIRE(space.dim(1) == 3);

    // Leading factor is the most significant digit.
    REQUIRE(space.flatten({1, 2, 3}) == 1 * 12 + 2 * 4 + 3);
    REQUIRE(space.unflatten(23) == std::vector<int>{1, 2, 3});
    for (int flat = 0; flat < space.total(); ++flat)
        REQUIRE(space.flatten(space.unflatten(flat)) == flat);

    REQUIRE(CompositeSpace::single(5).total() == 5);
    REQUIRE(space.tensor(CompositeSpace({2})).dims() == std::vector<int>{2, 3, 4, 2});
    REQUIRE(space.subspace({0, 2}).dims() == std::vector<int>{2, 4});
    REQUIRE(space == CompositeSpace({2, 3, 4}));
    REQUIRE_FALSE(space == CompositeSpace({2, 3}));

    REQUIRE_THROWS_AS(CompositeSpace({2, 0}), std::invalid_argument);
    REQUIRE_THROWS_AS(space.flatten({1, 2}), std::invalid_argument);
    REQUIRE_THROWS_AS(space.subspace({}), std::invalid_argument);
    REQUIRE_THROWS_AS(space.subspace({0, 0}), std::invalid_argument);
}

TEST_CASE("operator basics and predicates") {
    const Operator h = hadamard();
    REQUIRE(h.is_unitary());
    REQUIRE(h.is_hermitian());
    REQUIRE_FALSE(h.is_projector());

    const Operator p = spin_up().density();
    REQUIRE(p.is_projector());
    REQUIRE(p.is_density());
    REQUIRE(p.is_psd());

    Matrix nilpotent = Matrix::Zero(2, 2);
    nilpotent(0, 1) = 1.0;
    const Operator n(nilpotent, qubit());
    REQUIRE_FALSE(n.is_hermitian());
    REQUIRE(n.hermiticity_defect() == Catch::Approx(1.0));

    Matrix d = Matrix::Zero(2, 2);
    d(0, 0) = 3.0;
    d(1, 1) = -4.0;
    const Operator diag(d, qubit());
    REQUIRE(diag.trace_norm() == Catch::Approx(7.0));
    REQUIRE(diag.trace().real() == Catch::Approx(-1.0));
    REQUIRE(diag.frobenius_norm() == Catch::Approx(5.0));

    REQUIRE_THROWS_AS(h * cnot(), std::invalid_argument); // space mismatch
    REQUIRE(max_abs((h.adjoint() * h - Operator::identity(qubit())).matrix()) < 1e-14);
}

TEST_CASE("tensor product matches hand-built Kronecker blocks") {
    const Operator xz = tensor_product(sigma_x(), sigma_z());
    REQUIRE(xz.space().dims() == std::vector<int>{2, 2});
    Matrix expect = Matrix::Zero(4, 4);
    expect(0, 2) = 1;
    expect(1, 3) = -1;
    expect(2, 0) = 1;
    expect(3, 1) = -1;
    REQUIRE(max_abs((xz.matrix() - expect)) < 1e-15);
}

TEST_CASE("partial trace agrees with the brute-force reference") {
    const CompositeSpace space({2, 3, 2});
    const Operator rho = random_density(space, space.total(), 401);
    for (const auto& keep : {std::vector<int>{0}, {1}, {2}, {0, 1}, {1, 2}, {0, 2}}) {
        const Operator traced = partial_trace(rho, keep);
        REQUIRE(traced.space() == space.subspace(keep));
        REQUIRE(max_abs(traced.matrix() - brute_partial_trace(rho, keep)) < 1e-13);
        REQUIRE(std::abs(traced.trace() - rho.trace()) < 1e-12);
    }
    REQUIRE_THROWS_AS(partial_trace(rho, {0, 1, 2}), std::invalid_argument);
    REQUIRE_THROWS_AS(partial_trace(rho, {}), std::invalid_argument);
}

TEST_CASE("embedding on factors") {
    const CompositeSpace two_qubits({2, 2});
    REQUIRE(max_abs((embed_on_factors(sigma_x(), two_qubits, {0}) -
                     tensor_product(sigma_x(), Operator::identity(qubit())))
                        .matrix()) < 1e-15);
    REQUIRE(max_abs((embed_on_factors(sigma_x(), two_qubits, {1}) -
                     tensor_product(Operator::identity(qubit()), sigma_x()))
                        .matrix()) < 1e-15);

    // Lifting is an algebra homomorphism, also for out-of-order targets.
    const CompositeSpace space({2, 3, 2});
    const CompositeSpace pair_space({2, 2});
    const Operator a = random_unitary(pair_space, 11);
    const Operator b = random_unitary(pair_space, 12);
    const Operator lifted_product = embed_on_factors(a * b, space, {2, 0});
    const Operator product_of_lifted =
        embed_on_factors(a, space, {2, 0}) * embed_on_factors(b, space, {2, 0});
    REQUIRE(max_abs((lifted_product - product_of_lifted).matrix()) < 1e-13);
    REQUIRE(embed_on_factors(a, space, {2, 0}).is_unitary());

    REQUIRE_THROWS_AS(embed_on_factors(a, space, {0, 0}), std::invalid_argument);
    REQUIRE_THROWS_AS(embed_on_factors(a, space, {0, 1}), std::invalid_argument); // dims differ
}

TEST_CASE("phase aligned distance") {
    const Operator u = random_unitary(CompositeSpace({3}), 77);
    const Operator rotated = std::polar(1.0, 1.234) * u;
    REQUIRE(phase_aligned_distance(u, rotated) < 1e-13);

    Matrix d = Matrix::Identity(2, 2);
    d(1, 1) = -1.0;
    REQUIRE(phase_aligned_distance(Operator::identity(qubit()), Operator(d, qubit())) ==
            Catch::Approx(2.0));
}

TEST_CASE("state vectors normalize and compose") {
    Vector raw(2);
    raw << 2.0, 0.0;
    const StateVector s(raw, qubit());
    REQUIRE(std::abs(s.amplitudes()(0) - 1.0) < 1e-15);

    REQUIRE_THROWS_AS(StateVector(Vector::Zero(2), qubit()), std::invalid_argument);

    REQUIRE(std::abs(spin_up().inner(spin_up_x()) - cxd(1.0 / std::sqrt(2.0), 0.0)) < 1e-15);
    REQUIRE(std::abs(spin_up().density().trace() - 1.0) < 1e-15);
    REQUIRE(spin_up().tensor(spin_down()).space().dims() == std::vector<int>{2, 2});

    const StateVector fock = StateVector::basis_state(CompositeSpace({2, 3}), 4);
    REQUIRE(std::abs(fock.amplitudes()(4) - 1.0) < 1e-15);
}

TEST_CASE("factor permutation relabels amplitudes") {
    const CompositeSpace space({2, 3});
    const StateVector psi = random_pure(space, 500);
    const StateVector flipped = permute_factors(psi, {1, 0});
    REQUIRE(flipped.space().dims() == std::vector<int>{3, 2});
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 3; ++j)
            REQUIRE(std::abs(flipped.amplitudes()(flipped.space().flatten({j, i})) -
                             psi.amplitudes()(space.flatten({i, j}))) < 1e-15);
    REQUIRE_THROWS_AS(permute_factors(psi, {0, 0}), std::invalid_argument);
}

TEST_CASE("factor-local application equals the dense lift") {
    const CompositeSpace space({2, 3, 2});
    const StateVector psi = random_pure(space, 501);
    const Operator u = random_unitary(CompositeSpace({2, 2}), 502);
    const StateVector fast = apply_on_factors(psi, u, {0, 2});
    const Vector dense = embed_on_factors(u, space, {0, 2}).matrix() * psi.amplitudes();
    REQUIRE((fast.amplitudes() - dense).cwiseAbs().maxCoeff() < 1e-13);
    REQUIRE_THROWS_AS(apply_on_factors(psi, u, {2, 0}), std::invalid_argument);
}

TEST_CASE("reduced density and Schmidt rank") {
    const CompositeSpace space({2, 2, 3});
    const StateVector psi = random_pure(space, 503);
    for (const auto& keep : {std::vector<int>{0}, {2}, {0, 1}}) {
        REQUIRE(max_abs((reduced_density(psi, keep) - partial_trace(psi.density(), keep))
                            .matrix()) < 1e-13);
    }

    REQUIRE(schmidt_rank(spin_up().tensor(spin_down()), {0}) == 1);
    REQUIRE(schmidt_rank(bell_basis().vector(0), {0}) == 2);

    Vector ghz_raw = Vector::Zero(8);
    ghz_raw(0) = 1.0;
    ghz_raw(7) = 1.0;
    const StateVector ghz(ghz_raw, CompositeSpace({2, 2, 2}));
    REQUIRE(schmidt_rank(ghz, {0}) == 2);
    REQUIRE(schmidt_rank(ghz, {0, 1}) == 2);
}

TEST_CASE("spectral decomposition invariants") {
    const Observable z = spectral_decomposition(sigma_z());
    REQUIRE(z.spectrum().size() == 2);
    REQUIRE(z.spectrum()[0].value == Catch::Approx(-1.0)); // ascending
    REQUIRE(z.spectrum()[1].value == Catch::Approx(1.0));
    REQUIRE(max_abs((z.spectrum()[1].projector - spin_up().density()).matrix()) < 1e-12);
    REQUIRE(z.projector_for(1.0) != nullptr);
    REQUIRE(z.projector_for(0.5) == nullptr);

    Rng rng(90);
    Matrix g(4, 4);
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) g(r, c) = rng.complex_gaussian();
    const Operator h(0.5 * (g + g.adjoint().eval()), CompositeSpace({4}));
    const Observable obs = spectral_decomposition(h);
    Operator sum = Operator::zero(h.space());
    Operator reconstructed = Operator::zero(h.space());
    for (const auto& pair : obs.spectrum()) {
        REQUIRE(max_abs((pair.projector * pair.projector - pair.projector).matrix()) < 1e-10);
        sum = sum + pair.projector;
        reconstructed = reconstructed + cxd(pair.value, 0.0) * pair.projector;
    }
    REQUIRE(max_abs((sum - Operator::identity(h.space())).matrix()) < 1e-10);
    REQUIRE(max_abs((reconstructed - h).matrix()) < 1e-10);

    // Planted degeneracy and sub-tolerance splitting both merge projectors.
    Matrix dm = Matrix::Zero(3, 3);
    dm(0, 0) = 1.0;
    dm(1, 1) = 1.0 + 5e-9;
    dm(2, 2) = 2.0;
    const Observable merged = spectral_decomposition(Operator(dm, CompositeSpace({3})));
    REQUIRE(merged.spectrum().size() == 2);
    REQUIRE(std::abs(merged.spectrum()[0].projector.trace() - 2.0) < 1e-10);

    Matrix bad = Matrix::Zero(2, 2);
    bad(0, 1) = 1.0;
    REQUIRE_THROWS_AS(spectral_decomposition(Operator(bad, qubit())), std::invalid_argument);
}

TEST_CASE("random sampling is deterministic and well formed") {
    const CompositeSpace space({4});
    const Operator u1 = random_unitary(space, 1234);
    const Operator u2 = random_unitary(space, 1234);
    REQUIRE((u1.matrix() - u2.matrix()).cwiseAbs().maxCoeff() == 0.0); // bit-identical under one seed
    REQUIRE(u1.is_unitary(1e-12));
    REQUIRE(max_abs((u1 - random_unitary(space, 1235)).matrix()) > 1e-3);

    REQUIRE(derive_seed(7, "alpha") != derive_seed(7, "beta"));
    REQUIRE(derive_seed(7, "alpha") != derive_seed(8, "alpha"));
    REQUIRE(derive_seed(7, "alpha") == derive_seed(7, "alpha"));

    const Operator rho = random_density(CompositeSpace({2, 2}), 2, 99);
    REQUIRE(rho.is_density());
    Eigen::SelfAdjointEigenSolver<Matrix> es(rho.matrix());
    int positive = 0;
    for (int i = 0; i < 4; ++i)
        if (es.eigenvalues()(i) > 1e-10) ++positive;
    REQUIRE(positive == 2); // requested rank

    const StateVector pure = random_pure(space, 55);
    REQUIRE(std::abs(pure.amplitudes().norm() - 1.0) < 1e-12);

    Rng rng(11);
    double mean = 0.0;
    double var = 0.0;
    const int draws = 4000;
    for (int i = 0; i < draws; ++i) {
        const double u = rng.uniform();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        const int k = rng.uniform_int(6);
        REQUIRE(k >= 0);
        REQUIRE(k < 6);
        const double g = rng.gaussian();
        mean += g / draws;
        var += g * g / draws;
    }
    REQUIRE(std::abs(mean) < 0.05);
    REQUIRE(std::abs(var - 1.0) < 0.1);
}

TEST_CASE("text serialization round trips exactly") {
    const Operator op = random_unitary(CompositeSpace({2, 3}), 314);
    std::istringstream op_in(to_text(op));
    const Operator op_back = operator_from_text(op_in);
    REQUIRE(op_back.space() == op.space());
    REQUIRE((op_back.matrix() - op.matrix()).cwiseAbs().maxCoeff() == 0.0); // hexfloat: bit-exact

    const StateVector psi = random_pure(CompositeSpace({2, 2, 2}), 315);
    std::istringstream psi_in(to_text(psi));
    const StateVector psi_back = state_from_text(psi_in);
    REQUIRE(psi_back.space() == psi.space());
    REQUIRE((psi_back.amplitudes() - psi.amplitudes()).cwiseAbs().maxCoeff() == 0.0);

    std::istringstream junk("banana\ndims 2\n0,0");
    REQUIRE_THROWS(operator_from_text(junk));
}
