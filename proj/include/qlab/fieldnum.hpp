#pragma once

#include <complex>
#include <vector>

namespace qlab::fieldnum {

using cxd = std::complex<double>;

// A spacetime displacement (t, r) with mass parameter, in natural units
// (c = ħ = 1). Classification follows the causal structure: r > |t| is
// spacelike, r < |t| timelike, r = |t| lightlike.
struct IntervalPoint {
    double t = 0.0;
    double r = 0.0; // ≥ 0
    double m = 0.0; // ≥ 0

    enum class Kind { spacelike, timelike, lightlike };
    Kind kind() const;
    // Invariant interval s² = r² − t² (positive spacelike, negative timelike).
    double invariant() const { return r * r - t * t; }
};

enum class DeltaMethod { closed_form, quadrature };

// Controls for the regulated radial quadrature: the two-point integral is
// reduced to ∫₀^∞ (p/E)·sin(pr)·e^{−iEt}·e^{−εp} dp / (4π²r), evaluated with
// fixed-order Gauss–Legendre panels narrower than the oscillation period, at
// a geometric ladder of regulator strengths ε = eps0·ratioᵏ, then
// extrapolated to ε → 0 (Richardson, component-wise: the imaginary part of a
// spacelike value carries only odd powers of ε, everything else all powers).
struct QuadratureParams {
    double eps0 = 1e-2;
    int ladder_depth = 3; // number of regulator values; ≥ 2
    double ratio = 0.5;
    double tail_tol = 1e-15; // truncate where the damped tail drops below this
    int panel_order = 20;
};

// The invariant two-point function of a free scalar field. The closed form
// uses the Bessel representations ((m/4π²s)·K₁(ms) spacelike,
// (m/8πτ)·(Y₁(mτ) + i·sgn(t)·J₁(mτ)) timelike, 1/(4π²s²) massless); the
// quadrature path needs r > 0 and refuses lightlike points (distributional
// singularity). Throws with ladder diagnostics if the extrapolation fails to
// settle.
cxd delta_plus(const IntervalPoint& p, DeltaMethod method, const QuadratureParams& q = {});

// antisym = Δ₊(t, r) − Δ₊(−t, r), sym = Δ₊(t, r) + Δ₊(−t, r). Reversing t
// conjugates the integrand pointwise, so these reduce to 2i·Im and 2·Re of a
// single evaluation; both members vanish/survive per the causal structure:
// spacelike antisym ≈ 0 with sym ≠ 0, timelike antisym ≠ 0 (massive case).
struct CommutatorValues {
    cxd antisym;
    cxd sym;
};
CommutatorValues commutator_functions(const IntervalPoint& p, DeltaMethod method,
                                      const QuadratureParams& q = {});

// One row of a causal-structure sweep over spacelike points, quadrature
// values checked against the closed form.
struct SweepRow {
    IntervalPoint point;
    double s_squared = 0.0;
    double antisym_mag = 0.0;
    double sym_mag = 0.0;
    double closed_form_rel_dev = 0.0;
};

// Cartesian sweep over (mass, t, r); every point must be spacelike.
// Deterministic row order: mass-major, then t, then r.
std::vector<SweepRow> sweep_spacelike_grid(const std::vector<double>& masses,
                                           const std::vector<double>& ts,
                                           const std::vector<double>& rs,
                                           const QuadratureParams& q = {});

} // namespace qlab::fieldnum
