#include "qlab/composite_space.hpp"

#include <stdexcept>
#include <string>

namespace qlab {

namespace {

int checked_product(const std::vector<int>& dims) {
    if (dims.empty()) throw std::invalid_argument("CompositeSpace: empty factor list");
    long long total = 1;
    for (int d : dims) {
        if (d < 1) throw std::invalid_argument("CompositeSpace: factor dimension < 1");
        total *= d;
        if (total > (1 << 26))
            throw std::invalid_argument("CompositeSpace: total dimension exceeds desk-scale cap");
    }
    return static_cast<int>(total);
}

} // namespace

CompositeSpace::CompositeSpace(std::vector<int> dims)
    : dims_(std::move(dims)), total_(checked_product(dims_)) {}

CompositeSpace::CompositeSpace(std::initializer_list<int> dims)
    : CompositeSpace(std::vector<int>(dims)) {}

CompositeSpace CompositeSpace::single(int d) { return CompositeSpace({d}); }

int CompositeSpace::dim(int factor) const {
    if (factor < 0 || factor >= factor_count())
        throw std::invalid_argument("CompositeSpace: factor index out of range");
    return dims_[static_cast<std::size_t>(factor)];
}

CompositeSpace CompositeSpace::tensor(const CompositeSpace& other) const {
    std::vector<int> dims = dims_;
    dims.insert(dims.end(), other.dims_.begin(), other.dims_.end());
    return CompositeSpace(std::move(dims));
}

CompositeSpace CompositeSpace::subspace(const std::vector<int>& keep) const {
    if (keep.empty()) throw std::invalid_argument("CompositeSpace: empty subspace selection");
    std::vector<bool> seen(dims_.size(), false);
    for (int f : keep) {
        if (f < 0 || f >= factor_count())
            throw std::invalid_argument("CompositeSpace: subspace factor index out of range");
        if (seen[static_cast<std::size_t>(f)])
            throw std::invalid_argument("CompositeSpace: repeated subspace factor index");
        seen[static_cast<std::size_t>(f)] = true;
    }
    std::vector<int> dims;
    for (int f = 0; f < factor_count(); ++f)
        if (seen[static_cast<std::size_t>(f)]) dims.push_back(dims_[static_cast<std::size_t>(f)]);
    return CompositeSpace(std::move(dims));
}

std::vector<int> CompositeSpace::unflatten(int flat) const {
    if (flat < 0 || flat >= total_)
        throw std::invalid_argument("CompositeSpace: flat index out of range");
    std::vector<int> multi(dims_.size());
    for (int f = factor_count() - 1; f >= 0; --f) {
        const int d = dims_[static_cast<std::size_t>(f)];
        multi[static_cast<std::size_t>(f)] = flat % d;
        flat /= d;
    }
    return multi;
}

int CompositeSpace::flatten(const std::vector<int>& multi) const {
    if (static_cast<int>(multi.size()) != factor_count())
        throw std::invalid_argument("CompositeSpace: multi-index arity mismatch");
    int flat = 0;
    for (int f = 0; f < factor_count(); ++f) {
        const int d = dims_[static_cast<std::size_t>(f)];
        const int i = multi[static_cast<std::size_t>(f)];
        if (i < 0 || i >= d)
            throw std::invalid_argument("CompositeSpace: multi-index component out of range");
        flat = flat * d + i;
    }
    return flat;
}

} // namespace qlab
