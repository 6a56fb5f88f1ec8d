#include "qlab/random.hpp"

#include <Eigen/QR>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace qlab {

double Rng::uniform() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
}

int Rng::uniform_int(int n) {
    if (n <= 0) throw std::invalid_argument("Rng::uniform_int: n must be positive");
    // Rejection sampling keeps the distribution exactly uniform.
    const std::uint64_t bound = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % static_cast<std::uint64_t>(n);
    std::uint64_t x;
    do {
        x = gen_();
    } while (x >= bound);
    return static_cast<int>(x % static_cast<std::uint64_t>(n));
}

double Rng::gaussian() {
    // Box-Muller; u clamped away from 0 so the log stays finite.
    double u = uniform();
    if (u < 0x1.0p-60) u = 0x1.0p-60;
    const double v = uniform();
    return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * std::numbers::pi * v);
}

cxd Rng::complex_gaussian() {
    const double a = gaussian();
    const double b = gaussian();
    return cxd(a, b) / std::sqrt(2.0);
}

std::uint64_t derive_seed(std::uint64_t root, std::string_view label) {
    // FNV-1a over the label, then splitmix64 finalization mixed with the root.
    std::uint64_t h = 1469598103934665603ull;
    for (char c : label) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ull;
    }
    std::uint64_t z = root + 0x9e3779b97f4a7c15ull + h;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

namespace {
Matrix ginibre(int rows, int cols, Rng& rng) {
    Matrix g(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) g(i, j) = rng.complex_gaussian();
    return g;
}
} // namespace

Operator random_unitary(const CompositeSpace& space, std::uint64_t seed) {
    Rng rng(seed);
    const int d = space.total();
    const Matrix g = ginibre(d, d, rng);
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ();
    const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    // Phase correction makes the distribution Haar rather than QR-biased.
    for (int j = 0; j < d; ++j) {
        const cxd rjj = r(j, j);
        const double mag = std::abs(rjj);
        q.col(j) *= (mag > 0.0) ? rjj / mag : cxd(1.0, 0.0);
    }
    return Operator(std::move(q), space);
}

Operator random_density(const CompositeSpace& space, int rank, std::uint64_t seed) {
    const int d = space.total();
    if (rank < 1 || rank > d)
        throw std::invalid_argument("random_density: rank must be in [1, total]");
    Rng rng(seed);
    const Matrix g = ginibre(d, rank, rng);
    Matrix rho = g * g.adjoint();
    rho /= rho.trace();
    return Operator(std::move(rho), space);
}

StateVector random_pure(const CompositeSpace& space, std::uint64_t seed) {
    Rng rng(seed);
    Vector v(space.total());
    for (int i = 0; i < space.total(); ++i) v(i) = rng.complex_gaussian();
    return StateVector(std::move(v), space);
}

} // namespace qlab
