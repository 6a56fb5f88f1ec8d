#include "qlab/state_vector.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <stdexcept>

namespace qlab {

StateVector::StateVector(Vector amplitudes, CompositeSpace space)
    : v_(std::move(amplitudes)), space_(std::move(space)) {
    if (v_.size() != space_.total())
        throw std::invalid_argument("StateVector: length does not match space");
    const double n = v_.norm();
    if (n < 1e-14) throw std::invalid_argument("StateVector: zero vector is not a state");
    v_ /= n;
}

StateVector StateVector::basis_state(const CompositeSpace& space, int index) {
    if (index < 0 || index >= space.total())
        throw std::invalid_argument("StateVector: basis index out of range");
    Vector v = Vector::Zero(space.total());
    v(index) = 1.0;
    return StateVector(std::move(v), space);
}

cxd StateVector::inner(const StateVector& other) const {
    if (!(space_ == other.space_))
        throw std::invalid_argument("StateVector: inner product across different spaces");
    return v_.dot(other.v_); // Eigen dot conjugates the left argument
}

Operator StateVector::density() const { return Operator(v_ * v_.adjoint(), space_); }

StateVector StateVector::tensor(const StateVector& other) const {
    Vector out(static_cast<Eigen::Index>(dim()) * other.dim());
    for (int i = 0; i < dim(); ++i)
        out.segment(static_cast<Eigen::Index>(i) * other.dim(), other.dim()) =
            v_(i) * other.v_;
    return StateVector(std::move(out), space_.tensor(other.space_));
}

StateVector permute_factors(const StateVector& psi, const std::vector<int>& perm) {
    const CompositeSpace& space = psi.space();
    const int nf = space.factor_count();
    if (static_cast<int>(perm.size()) != nf)
        throw std::invalid_argument("permute_factors: permutation arity mismatch");
    std::vector<bool> seen(static_cast<std::size_t>(nf), false);
    std::vector<int> new_dims(perm.size());
    for (int k = 0; k < nf; ++k) {
        const int f = perm[static_cast<std::size_t>(k)];
        if (f < 0 || f >= nf || seen[static_cast<std::size_t>(f)])
            throw std::invalid_argument("permute_factors: not a permutation");
        seen[static_cast<std::size_t>(f)] = true;
        new_dims[static_cast<std::size_t>(k)] = space.dim(f);
    }
    CompositeSpace out_space(new_dims);
    Vector out(space.total());
    std::vector<int> multi_new(perm.size());
    for (int flat = 0; flat < space.total(); ++flat) {
        const std::vector<int> multi = space.unflatten(flat);
        for (int k = 0; k < nf; ++k)
            multi_new[static_cast<std::size_t>(k)] = multi[static_cast<std::size_t>(perm[static_cast<std::size_t>(k)])];
        out(out_space.flatten(multi_new)) = psi.amplitudes()(flat);
    }
    return StateVector(std::move(out), std::move(out_space));
}

StateVector apply_on_factors(const StateVector& psi, const Operator& u,
                             const std::vector<int>& targets) {
    const CompositeSpace& space = psi.space();
    const CompositeSpace target_space = space.subspace(targets);
    // subspace() keeps original order; require the caller's order to match it
    // so the local operator's own factor order is unambiguous.
    {
        std::vector<int> sorted = targets;
        std::sort(sorted.begin(), sorted.end());
        if (sorted != targets)
            throw std::invalid_argument("apply_on_factors: targets must be in ascending order");
    }
    if (!(u.space() == target_space))
        throw std::invalid_argument("apply_on_factors: operator space does not match targets");

    const int dloc = target_space.total();
    const int total = space.total();

    std::vector<long long> stride(static_cast<std::size_t>(space.factor_count()));
    long long acc = 1;
    for (int f = space.factor_count() - 1; f >= 0; --f) {
        stride[static_cast<std::size_t>(f)] = acc;
        acc *= space.dim(f);
    }
    std::vector<long long> loc_off(static_cast<std::size_t>(dloc));
    for (int flat = 0; flat < dloc; ++flat) {
        const std::vector<int> multi = target_space.unflatten(flat);
        long long o = 0;
        for (std::size_t k = 0; k < targets.size(); ++k)
            o += multi[k] * stride[static_cast<std::size_t>(targets[static_cast<std::size_t>(k)])];
        loc_off[static_cast<std::size_t>(flat)] = o;
    }

    // Enumerate the complementary ("rest") indices once, then matrix-multiply
    // each local slice.
    std::vector<int> rest_factors;
    for (int f = 0; f < space.factor_count(); ++f)
        if (std::find(targets.begin(), targets.end(), f) == targets.end())
            rest_factors.push_back(f);

    Vector out = Vector::Zero(total);
    if (rest_factors.empty()) {
        out = u.matrix() * psi.amplitudes();
        return StateVector(std::move(out), space);
    }
    const CompositeSpace rest_space = space.subspace(rest_factors);
    std::vector<long long> rest_off(static_cast<std::size_t>(rest_space.total()));
    for (int flat = 0; flat < rest_space.total(); ++flat) {
        const std::vector<int> multi = rest_space.unflatten(flat);
        long long o = 0;
        for (std::size_t k = 0; k < rest_factors.size(); ++k)
            o += multi[k] * stride[static_cast<std::size_t>(rest_factors[k])];
        rest_off[static_cast<std::size_t>(flat)] = o;
    }

    Vector slice(dloc);
    for (long long ro : rest_off) {
        for (int a = 0; a < dloc; ++a) slice(a) = psi.amplitudes()(ro + loc_off[static_cast<std::size_t>(a)]);
        const Vector mapped = u.matrix() * slice;
        for (int a = 0; a < dloc; ++a) out(ro + loc_off[static_cast<std::size_t>(a)]) = mapped(a);
    }
    return StateVector(std::move(out), space);
}

Operator reduced_density(const StateVector& psi, const std::vector<int>& keep) {
    const CompositeSpace& space = psi.space();
    const CompositeSpace out_space = space.subspace(keep);
    std::vector<bool> kept(static_cast<std::size_t>(space.factor_count()), false);
    for (int f : keep) kept[static_cast<std::size_t>(f)] = true;
    std::vector<int> rest_factors;
    for (int f = 0; f < space.factor_count(); ++f)
        if (!kept[static_cast<std::size_t>(f)]) rest_factors.push_back(f);
    if (rest_factors.empty())
        throw std::invalid_argument("reduced_density: keep must be a proper subset");

    // ψ reshaped to (kept × rest); ρ_kept = Ψ Ψ†.
    std::vector<long long> stride(static_cast<std::size_t>(space.factor_count()));
    long long acc = 1;
    for (int f = space.factor_count() - 1; f >= 0; --f) {
        stride[static_cast<std::size_t>(f)] = acc;
        acc *= space.dim(f);
    }
    const CompositeSpace rest_space = space.subspace(rest_factors);
    std::vector<int> kept_factors;
    for (int f = 0; f < space.factor_count(); ++f)
        if (kept[static_cast<std::size_t>(f)]) kept_factors.push_back(f);
    Matrix reshaped(out_space.total(), rest_space.total());
    for (int i = 0; i < out_space.total(); ++i) {
        const std::vector<int> mi = out_space.unflatten(i);
        long long oi = 0;
        for (std::size_t k = 0; k < kept_factors.size(); ++k)
            oi += mi[k] * stride[static_cast<std::size_t>(kept_factors[k])];
        for (int e = 0; e < rest_space.total(); ++e) {
            const std::vector<int> me = rest_space.unflatten(e);
            long long oe = 0;
            for (std::size_t k = 0; k < rest_factors.size(); ++k)
                oe += me[k] * stride[static_cast<std::size_t>(rest_factors[k])];
            reshaped(i, e) = psi.amplitudes()(oi + oe);
        }
    }
    return Operator(reshaped * reshaped.adjoint(), out_space);
}

int schmidt_rank(const StateVector& psi, const std::vector<int>& left_factors, double tol) {
    const CompositeSpace& space = psi.space();
    const CompositeSpace left_space = space.subspace(left_factors);
    std::vector<bool> is_left(static_cast<std::size_t>(space.factor_count()), false);
    for (int f : left_factors) is_left[static_cast<std::size_t>(f)] = true;
    std::vector<int> right_factors;
    for (int f = 0; f < space.factor_count(); ++f)
        if (!is_left[static_cast<std::size_t>(f)]) right_factors.push_back(f);
    if (right_factors.empty())
        throw std::invalid_argument("schmidt_rank: cut must leave factors on both sides");
    const CompositeSpace right_space = space.subspace(right_factors);

    std::vector<long long> stride(static_cast<std::size_t>(space.factor_count()));
    long long acc = 1;
    for (int f = space.factor_count() - 1; f >= 0; --f) {
        stride[static_cast<std::size_t>(f)] = acc;
        acc *= space.dim(f);
    }
    auto offset_of = [&](const CompositeSpace& sub, const std::vector<int>& factors, int flat) {
        const std::vector<int> multi = sub.unflatten(flat);
        long long o = 0;
        for (std::size_t k = 0; k < factors.size(); ++k)
            o += multi[k] * stride[static_cast<std::size_t>(factors[k])];
        return o;
    };
    std::vector<int> left_sorted;
    for (int f = 0; f < space.factor_count(); ++f)
        if (is_left[static_cast<std::size_t>(f)]) left_sorted.push_back(f);

    Matrix reshaped(left_space.total(), right_space.total());
    for (int i = 0; i < left_space.total(); ++i)
        for (int j = 0; j < right_space.total(); ++j)
            reshaped(i, j) = psi.amplitudes()(offset_of(left_space, left_sorted, i) +
                                              offset_of(right_space, right_factors, j));
    Eigen::JacobiSVD<Matrix> svd(reshaped);
    int rank = 0;
    for (Eigen::Index k = 0; k < svd.singularValues().size(); ++k)
        if (svd.singularValues()(k) > tol) ++rank;
    return rank;
}

} // namespace qlab
