#include "qlab/chsh.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qlab/qubits.hpp"

namespace qlab::chsh {

namespace {

constexpr double two_pi = 6.283185307179586476925286766559;

// Nelder–Mead maximization of f over R^4, started from x0. The landscape here
// (trigonometric polynomial) is smooth and benign, so a fixed small budget
// converges far below the 1e-6 tolerance the callers need.
template <typename F>
std::array<double, 4> simplex_maximize(const F& f, std::array<double, 4> x0, double step) {
    constexpr int n = 4;
    std::array<std::array<double, 4>, n + 1> pts;
    std::array<double, n + 1> val;
    pts[0] = x0;
    for (int i = 1; i <= n; ++i) {
        pts[i] = x0;
        pts[i][i - 1] += step;
    }
    for (int i = 0; i <= n; ++i) val[i] = f(pts[i]);

    auto order = [&] {
        for (int i = 0; i <= n; ++i)
            for (int j = i + 1; j <= n; ++j)
                if (val[j] > val[i]) {
                    std::swap(val[i], val[j]);
                    std::swap(pts[i], pts[j]);
                }
    };
    auto blend = [](const std::array<double, 4>& a, const std::array<double, 4>& b,
                    double t) {
        std::array<double, 4> out;
        for (int k = 0; k < 4; ++k) out[k] = a[k] + t * (b[k] - a[k]);
        return out;
    };

    for (int iter = 0; iter < 600; ++iter) {
        order();
        if (val[0] - val[n] < 1e-13) break;
        std::array<double, 4> centroid{};
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < 4; ++k) centroid[k] += pts[i][k] / n;

        const auto reflected = blend(centroid, pts[n], -1.0);
        const double fr = f(reflected);
        if (fr > val[0]) {
            const auto expanded = blend(centroid, pts[n], -2.0);
            const double fe = f(expanded);
            if (fe > fr) {
                pts[n] = expanded;
                val[n] = fe;
            } else {
                pts[n] = reflected;
                val[n] = fr;
            }
        } else if (fr > val[n - 1]) {
            pts[n] = reflected;
            val[n] = fr;
        } else {
            const auto contracted = blend(centroid, pts[n], 0.5);
            const double fc = f(contracted);
            if (fc > val[n]) {
                pts[n] = contracted;
                val[n] = fc;
            } else {
                for (int i = 1; i <= n; ++i) {
                    pts[i] = blend(pts[0], pts[i], 0.5);
                    val[i] = f(pts[i]);
                }
            }
        }
    }
    order();
    return pts[0];
}

} // namespace

ChshResult chsh_max(const Operator& rho, int grid_points, bool refine) {
    if (rho.dim() != 4)
        throw std::invalid_argument("chsh_max: need a two-qubit state");
    if (grid_points < 4)
        throw std::invalid_argument("chsh_max: grid too coarse");

    const std::array<Operator, 3> pauli{sigma_x(), sigma_y(), sigma_z()};
    ChshResult result;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            const Operator sij = tensor_product(pauli[static_cast<std::size_t>(i)],
                                                pauli[static_cast<std::size_t>(j)]);
            result.correlation(i, j) =
                std::real((Operator(rho.matrix(), sij.space()) * sij).trace());
        }

    Eigen::JacobiSVD<Eigen::Matrix3d> svd(result.correlation);
    const double s0 = svd.singularValues()(0);
    const double s1 = svd.singularValues()(1);
    result.plane_singular_values = {s0, s1};

    // Correlation for directions inside the dominant principal plane:
    // E(θ, φ) = s0·cosθ·cosφ + s1·sinθ·sinφ.
    auto corr = [s0, s1](double theta, double phi) {
        return s0 * std::cos(theta) * std::cos(phi) + s1 * std::sin(theta) * std::sin(phi);
    };
    auto value_of = [&corr](const std::array<double, 4>& a) {
        return corr(a[0], a[2]) + corr(a[0], a[3]) + corr(a[1], a[2]) - corr(a[1], a[3]);
    };

    std::array<double, 4> best{0.0, 0.0, 0.0, 0.0};
    double best_val = value_of(best);
    const double h = two_pi / grid_points;
    for (int ia = 0; ia < grid_points; ++ia)
        for (int ib = 0; ib < grid_points; ++ib)
            for (int ic = 0; ic < grid_points; ++ic) {
                const std::array<double, 4> cand{0.0, ia * h, ib * h, ic * h};
                const double v = value_of(cand);
                if (v > best_val) {
                    best_val = v;
                    best = cand;
                }
            }

    if (refine) best = simplex_maximize(value_of, best, 0.25 * h);
    result.angles = best;
    result.value = value_of(best);
    return result;
}

} // namespace qlab::chsh
