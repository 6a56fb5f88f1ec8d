#include "qlab/fieldnum.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace qlab::fieldnum {

namespace {

constexpr double pi = 3.14159265358979323846264338328;

struct GaussRule {
    std::vector<double> nodes;   // on (-1, 1)
    std::vector<double> weights; // sum to 2
};

// Gauss–Legendre rule by Newton iteration on the Legendre recurrence.
GaussRule gauss_legendre(int n) {
    GaussRule rule;
    rule.nodes.resize(static_cast<std::size_t>(n));
    rule.weights.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        double x = std::cos(pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        rule.nodes[static_cast<std::size_t>(i)] = x;
        rule.weights[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return rule;
}

struct KahanSum {
    double total = 0.0, carry = 0.0;
    void add(double x) {
        const double y = x - carry;
        const double t = total + y;
        carry = (t - total) - y;
        total = t;
    }
};

// ∫₀^{p_max} (p/E)·sin(pr)·e^{−iEt}·e^{−εp} dp / (4π²r), panels narrower
// than half an oscillation period so the fixed-order rule is exact to
// rounding, panel contributions compensated-summed.
cxd regulated_integral(double t, double r, double m, double eps, const QuadratureParams& q) {
    if (r <= 0.0)
        throw std::invalid_argument("quadrature path needs r > 0 (radial reduction)");
    const GaussRule rule = gauss_legendre(q.panel_order);
    const double p_max = -std::log(q.tail_tol * eps) / eps;
    const double panel = pi / (std::abs(t) + r + 1.0);
    const long long n_panels = static_cast<long long>(std::ceil(p_max / panel));

    KahanSum re, im;
    for (long long k = 0; k < n_panels; ++k) {
        const double a = k * panel;
        const double half = 0.5 * panel;
        const double mid = a + half;
        double pr = 0.0, pim = 0.0;
        for (int j = 0; j < q.panel_order; ++j) {
            const double p = mid + half * rule.nodes[static_cast<std::size_t>(j)];
            const double e = std::sqrt(p * p + m * m);
            const double amp = rule.weights[static_cast<std::size_t>(j)] * (p / e) *
                               std::sin(p * r) * std::exp(-eps * p);
            const double phase = e * t;
            pr += amp * std::cos(phase);
            pim -= amp * std::sin(phase);
        }
        re.add(half * pr);
        im.add(half * pim);
    }
    const double norm = 4.0 * pi * pi * r;
    return {re.total / norm, im.total / norm};
}

// Richardson elimination of the given ε powers from samples at
// ε = eps0·ratioᵏ; returns the extrapolated limit and the magnitude of the
// final correction as an error estimate.
double richardson(std::vector<double> vals, double ratio, const std::vector<int>& powers,
                  double* err_estimate) {
    double previous = vals.front();
    for (int power : powers) {
        if (vals.size() < 2) break;
        const double rr = std::pow(1.0 / ratio, power);
        std::vector<double> next;
        for (std::size_t i = 0; i + 1 < vals.size(); ++i)
            next.push_back((rr * vals[i + 1] - vals[i]) / (rr - 1.0));
        previous = vals.front();
        vals = std::move(next);
    }
    if (err_estimate) *err_estimate = std::abs(vals.front() - previous);
    return vals.front();
}

cxd closed_form_value(const IntervalPoint& p) {
    switch (p.kind()) {
    case IntervalPoint::Kind::spacelike: {
        const double s = std::sqrt(p.invariant());
        if (p.m == 0.0) return {1.0 / (4.0 * pi * pi * s * s), 0.0};
        return {p.m / (4.0 * pi * pi * s) * std::cyl_bessel_k(1.0, p.m * s), 0.0};
    }
    case IntervalPoint::Kind::timelike: {
        if (p.m == 0.0) return {1.0 / (4.0 * pi * pi * p.invariant()), 0.0};
        const double tau = std::sqrt(-p.invariant());
        const double scale = p.m / (8.0 * pi * tau);
        const double sign = p.t > 0.0 ? 1.0 : -1.0;
        return {scale * std::cyl_neumann(1.0, p.m * tau),
                scale * sign * std::cyl_bessel_j(1.0, p.m * tau)};
    }
    case IntervalPoint::Kind::lightlike:
        break;
    }
    throw std::invalid_argument("lightlike point refused: the value is distributional");
}

cxd quadrature_value(const IntervalPoint& p, const QuadratureParams& q) {
    if (p.kind() == IntervalPoint::Kind::lightlike)
        throw std::invalid_argument("lightlike point refused: the value is distributional");
    if (q.ladder_depth < 2)
        throw std::invalid_argument("regulator ladder needs at least 2 rungs");

    std::vector<double> re_vals, im_vals, ladder;
    for (int k = 0; k < q.ladder_depth; ++k) {
        const double eps = q.eps0 * std::pow(q.ratio, k);
        const cxd v = regulated_integral(p.t, p.r, p.m, eps, q);
        re_vals.push_back(v.real());
        im_vals.push_back(v.imag());
        ladder.push_back(eps);
    }

    std::vector<int> all_powers, im_powers;
    for (int k = 1; k < q.ladder_depth; ++k) all_powers.push_back(k);
    // At spacelike points the exact imaginary part vanishes and the regulator
    // contributes only odd powers, so eliminating 1, 3, 5, … converges much
    // deeper; timelike values carry every power in both components.
    if (p.kind() == IntervalPoint::Kind::spacelike)
        for (int k = 0; k + 1 < q.ladder_depth; ++k) im_powers.push_back(2 * k + 1);
    else
        im_powers = all_powers;

    double re_err = 0.0, im_err = 0.0;
    const double re = richardson(re_vals, q.ratio, all_powers, &re_err);
    const double im = richardson(im_vals, q.ratio, im_powers, &im_err);
    const double scale = std::abs(cxd(re, im));
    const double err = std::max(re_err, im_err);
    if (!std::isfinite(re) || !std::isfinite(im) || err > 0.1 * scale + 1e-6) {
        std::ostringstream os;
        os.precision(16);
        os << "regulator extrapolation did not settle at (t=" << p.t << ", r=" << p.r
           << ", m=" << p.m << "): ladder";
        for (std::size_t k = 0; k < ladder.size(); ++k)
            os << " eps=" << ladder[k] << " -> (" << re_vals[k] << ", " << im_vals[k]
               << ")";
        os << ", final correction " << err;
        throw std::runtime_error(os.str());
    }
    return {re, im};
}

} // namespace

IntervalPoint::Kind IntervalPoint::kind() const {
    if (r < 0.0) throw std::invalid_argument("spatial separation must be nonnegative");
    const double at = std::abs(t);
    if (r > at) return Kind::spacelike;
    if (r < at) return Kind::timelike;
    return Kind::lightlike;
}

cxd delta_plus(const IntervalPoint& p, DeltaMethod method, const QuadratureParams& q) {
    if (p.m < 0.0) throw std::invalid_argument("mass must be nonnegative");
    return method == DeltaMethod::closed_form ? closed_form_value(p)
                                              : quadrature_value(p, q);
}

CommutatorValues commutator_functions(const IntervalPoint& p, DeltaMethod method,
                                      const QuadratureParams& q) {
    // Δ₊(−t, r) = conj(Δ₊(t, r)): the time phase is the only complex factor.
    const cxd v = delta_plus(p, method, q);
    return {cxd(0.0, 2.0 * v.imag()), cxd(2.0 * v.real(), 0.0)};
}

std::vector<SweepRow> sweep_spacelike_grid(const std::vector<double>& masses,
                                           const std::vector<double>& ts,
                                           const std::vector<double>& rs,
                                           const QuadratureParams& q) {
    std::vector<SweepRow> rows;
    rows.reserve(masses.size() * ts.size() * rs.size());
    for (double m : masses)
        for (double t : ts)
            for (double r : rs) {
                const IntervalPoint p{t, r, m};
                if (p.kind() != IntervalPoint::Kind::spacelike)
                    throw std::invalid_argument("sweep grid must be purely spacelike");
                const cxd v = delta_plus(p, DeltaMethod::quadrature, q);
                const cxd cf = delta_plus(p, DeltaMethod::closed_form, q);
                SweepRow row;
                row.point = p;
                row.s_squared = p.invariant();
                row.antisym_mag = 2.0 * std::abs(v.imag());
                row.sym_mag = 2.0 * std::abs(v.real());
                row.closed_form_rel_dev = std::abs(v - cf) / std::abs(cf);
                rows.push_back(row);
            }
    return rows;
}

} // namespace qlab::fieldnum
