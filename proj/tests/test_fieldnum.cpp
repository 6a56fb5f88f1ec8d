#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "qlab/fieldnum.hpp"

using namespace qlab::fieldnum;

namespace {

double rel_dev(cxd a, cxd b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

} // namespace

TEST_CASE("interval classification") {
    REQUIRE(IntervalPoint{1.0, 2.0, 1.0}.kind() == IntervalPoint::Kind::spacelike);
    REQUIRE(IntervalPoint{2.0, 1.0, 1.0}.kind() == IntervalPoint::Kind::timelike);
    REQUIRE(IntervalPoint{1.5, 1.5, 1.0}.kind() == IntervalPoint::Kind::lightlike);
    REQUIRE(IntervalPoint{1.0, 2.0, 1.0}.invariant() == Catch::Approx(3.0));
    REQUIRE(IntervalPoint{2.0, 1.0, 1.0}.invariant() == Catch::Approx(-3.0));
}

TEST_CASE("closed forms hit independently pinned values") {
    // Spacelike, m = 1, s = 2: value K1(2)/(8·π²) with K1(2) = 0.13986588181652262.
    const cxd spacelike = delta_plus({0.0, 2.0, 1.0}, DeltaMethod::closed_form);
    REQUIRE(spacelike.real() == Catch::Approx(0.00177142208710367251).margin(1e-14));
    REQUIRE(spacelike.imag() == 0.0);

    // Massless at unit separation: exactly 1/(4π²).
    const cxd massless = delta_plus({0.0, 1.0, 0.0}, DeltaMethod::closed_form);
    REQUIRE(massless.real() == Catch::Approx(0.0253302959105844429).margin(1e-16));
    REQUIRE(massless.imag() == 0.0);

    // Timelike, m = 1, t = 2, r = 0.5 (τ² = 3.75).
    const cxd timelike = delta_plus({2.0, 0.5, 1.0}, DeltaMethod::closed_form);
    REQUIRE(timelike.real() == Catch::Approx(-0.00294322055489730887).margin(1e-14));
    REQUIRE(timelike.imag() == Catch::Approx(0.0119173264697369229).margin(1e-14));

    // Reversing the time argument conjugates the value.
    const cxd reversed = delta_plus({-2.0, 0.5, 1.0}, DeltaMethod::closed_form);
    REQUIRE(reversed.real() == Catch::Approx(timelike.real()).margin(1e-16));
    REQUIRE(reversed.imag() == Catch::Approx(-timelike.imag()).margin(1e-16));
}

TEST_CASE("regulated quadrature reproduces the closed forms") {
    const QuadratureParams q{}; // defaults
    const IntervalPoint spacelike{0.5, 2.0, 1.0};
    REQUIRE(rel_dev(delta_plus(spacelike, DeltaMethod::quadrature, q),
                    delta_plus(spacelike, DeltaMethod::closed_form)) < 1e-6);

    const IntervalPoint timelike{2.0, 0.5, 1.0};
    REQUIRE(rel_dev(delta_plus(timelike, DeltaMethod::quadrature, q),
                    delta_plus(timelike, DeltaMethod::closed_form)) < 1e-6);

    const IntervalPoint massless{0.3, 1.5, 0.0};
    REQUIRE(rel_dev(delta_plus(massless, DeltaMethod::quadrature, q),
                    delta_plus(massless, DeltaMethod::closed_form)) < 1e-6);
}

TEST_CASE("the value is a function of the invariant interval alone") {
    // (t, r) pairs with identical s² = 4.
    const cxd a = delta_plus({0.0, 2.0, 1.0}, DeltaMethod::quadrature);
    const cxd b = delta_plus({1.5, 2.5, 1.0}, DeltaMethod::quadrature);
    REQUIRE(std::abs(a - b) < 1e-8);
}

TEST_CASE("massless scaling law") {
    const cxd base = delta_plus({0.3, 1.5, 0.0}, DeltaMethod::quadrature);
    const cxd doubled = delta_plus({0.6, 3.0, 0.0}, DeltaMethod::quadrature);
    REQUIRE(rel_dev(4.0 * doubled, base) < 3e-6);
}

TEST_CASE("difference and sum combinations follow the causal structure") {
    QuadratureParams deep{};
    deep.ladder_depth = 4;

    const CommutatorValues space = commutator_functions({0.5, 2.0, 1.0},
                                                        DeltaMethod::quadrature, deep);
    REQUIRE(std::abs(space.antisym) < 1e-8);
    REQUIRE(space.antisym.real() == 0.0); // difference is purely imaginary by symmetry
    REQUIRE(space.sym.imag() == 0.0);     // sum is purely real by symmetry
    const cxd closed = delta_plus({0.5, 2.0, 1.0}, DeltaMethod::closed_form);
    REQUIRE(rel_dev(space.sym, 2.0 * closed) < 1e-6);

    const CommutatorValues time_closed =
        commutator_functions({2.0, 0.5, 1.0}, DeltaMethod::closed_form);
    REQUIRE(std::abs(time_closed.antisym) ==
            Catch::Approx(0.0238346529394738457).margin(1e-14));
    const CommutatorValues time_quad =
        commutator_functions({2.0, 0.5, 1.0}, DeltaMethod::quadrature, deep);
    REQUIRE(std::abs(time_quad.antisym) > 1e-3);
    REQUIRE(rel_dev(time_quad.antisym, time_closed.antisym) < 1e-6);

    // At t = 0 the difference vanishes identically, not merely approximately.
    const CommutatorValues frozen = commutator_functions({0.0, 2.0, 1.0},
                                                         DeltaMethod::quadrature);
    REQUIRE(std::abs(frozen.antisym) == 0.0);
}

TEST_CASE("domain validation and ladder diagnostics") {
    REQUIRE_THROWS_AS(delta_plus({1.0, 1.0, 1.0}, DeltaMethod::closed_form),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(delta_plus({1.0, 1.0, 1.0}, DeltaMethod::quadrature),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(delta_plus({0.0, -1.0, 1.0}, DeltaMethod::closed_form),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(delta_plus({0.0, 1.0, -1.0}, DeltaMethod::closed_form),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(delta_plus({0.5, 0.0, 1.0}, DeltaMethod::quadrature),
                      std::invalid_argument);

    // A hopeless regulator ladder must refuse rather than return noise.
    QuadratureParams hopeless{};
    hopeless.eps0 = 5.0;
    hopeless.ladder_depth = 2;
    REQUIRE_THROWS_AS(delta_plus({0.5, 2.0, 1.0}, DeltaMethod::quadrature, hopeless),
                      std::runtime_error);
}

TEST_CASE("spacelike sweep grid ordering and quality") {
    const std::vector<double> masses{0.5, 1.0};
    const std::vector<double> ts{0.1, 0.3};
    const std::vector<double> rs{1.0, 2.0};
    const auto rows = sweep_spacelike_grid(masses, ts, rs);
    REQUIRE(rows.size() == 8);

    // Mass-major ordering, then t, then r.
    REQUIRE(rows[0].point.m == Catch::Approx(0.5));
    REQUIRE(rows[0].point.t == Catch::Approx(0.1));
    REQUIRE(rows[0].point.r == Catch::Approx(1.0));
    REQUIRE(rows[1].point.r == Catch::Approx(2.0));
    REQUIRE(rows[2].point.t == Catch::Approx(0.3));
    REQUIRE(rows[4].point.m == Catch::Approx(1.0));

    for (const SweepRow& row : rows) {
        REQUIRE(row.s_squared ==
                Catch::Approx(row.point.r * row.point.r - row.point.t * row.point.t));
        REQUIRE(row.antisym_mag < 1e-8);
        REQUIRE(row.sym_mag > 1e-4);
        REQUIRE(row.closed_form_rel_dev < 1e-6);
    }

    REQUIRE_THROWS_AS(sweep_spacelike_grid({1.0}, {1.5}, {1.0}), std::invalid_argument);
}
