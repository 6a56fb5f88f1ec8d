#pragma once

#include <initializer_list>
#include <vector>

namespace qlab {

// Ordered list of tensor-factor dimensions; the single source of truth for
// tensor and partial-trace index arithmetic. Immutable after construction.
class CompositeSpace {
public:
    explicit CompositeSpace(std::vector<int> dims);
    CompositeSpace(std::initializer_list<int> dims);

    // Space with one factor of dimension d.
    static CompositeSpace single(int d);

    const std::vector<int>& dims() const { return dims_; }
    int factor_count() const { return static_cast<int>(dims_.size()); }
    int dim(int factor) const;
    // Product of all factor dimensions.
    int total() const { return total_; }

    // Concatenation of factor lists: this ⊗ other.
    CompositeSpace tensor(const CompositeSpace& other) const;
    // Space made of the given factors, kept in original order.
    // Indices must be distinct, in range, and nonempty.
    CompositeSpace subspace(const std::vector<int>& keep) const;

    // Mixed-radix conversion between a flat index in [0, total) and
    // per-factor indices (most significant factor first).
    std::vector<int> unflatten(int flat) const;
    int flatten(const std::vector<int>& multi) const;

    bool operator==(const CompositeSpace& other) const { return dims_ == other.dims_; }

private:
    std::vector<int> dims_;
    int total_;
};

} // namespace qlab
