#include "qlab/operator.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <stdexcept>

namespace qlab {

Operator::Operator(Matrix entries, CompositeSpace space)
    : m_(std::move(entries)), space_(std::move(space)) {
    if (m_.rows() != m_.cols())
        throw std::invalid_argument("Operator: matrix not square");
    if (m_.rows() != space_.total())
        throw std::invalid_argument("Operator: matrix dimension does not match space");
}

Operator Operator::identity(const CompositeSpace& space) {
    return Operator(Matrix::Identity(space.total(), space.total()), space);
}

Operator Operator::zero(const CompositeSpace& space) {
    return Operator(Matrix::Zero(space.total(), space.total()), space);
}

Operator Operator::adjoint() const { return Operator(m_.adjoint(), space_); }

cxd Operator::trace() const { return m_.trace(); }

double Operator::frobenius_norm() const { return m_.norm(); }

double Operator::trace_norm() const {
    Eigen::JacobiSVD<Matrix> svd(m_);
    return svd.singularValues().sum();
}

double Operator::hermiticity_defect() const {
    return (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
}

bool Operator::is_hermitian(double tol) const { return hermiticity_defect() <= tol; }

bool Operator::is_unitary(double tol) const {
    const Matrix gram = m_.adjoint() * m_;
    return (gram - Matrix::Identity(m_.rows(), m_.cols())).cwiseAbs().maxCoeff() <= tol;
}

bool Operator::is_psd(double tol) const {
    if (!is_hermitian(tol)) return false;
    Eigen::SelfAdjointEigenSolver<Matrix> es(m_, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff() >= -tol;
}

bool Operator::is_projector(double tol) const {
    if (!is_hermitian(tol)) return false;
    return (m_ * m_ - m_).cwiseAbs().maxCoeff() <= tol;
}

bool Operator::is_density(double tol) const {
    return is_psd(tol) && std::abs(trace() - cxd(1.0, 0.0)) <= tol;
}

namespace {
void require_same_space(const Operator& a, const Operator& b) {
    if (!(a.space() == b.space()))
        throw std::invalid_argument("Operator: operands live on different spaces");
}
} // namespace

Operator Operator::operator+(const Operator& other) const {
    require_same_space(*this, other);
    return Operator(m_ + other.m_, space_);
}

Operator Operator::operator-(const Operator& other) const {
    require_same_space(*this, other);
    return Operator(m_ - other.m_, space_);
}

Operator Operator::operator*(const Operator& other) const {
    require_same_space(*this, other);
    return Operator(m_ * other.m_, space_);
}

Operator operator*(cxd scalar, const Operator& op) {
    return Operator(scalar * op.m_, op.space_);
}

Operator tensor_product(const Operator& a, const Operator& b) {
    const int da = a.dim(), db = b.dim();
    Matrix out(static_cast<Eigen::Index>(da) * db, static_cast<Eigen::Index>(da) * db);
    for (int i = 0; i < da; ++i)
        for (int j = 0; j < da; ++j)
            out.block(static_cast<Eigen::Index>(i) * db, static_cast<Eigen::Index>(j) * db,
                      db, db) = a.matrix()(i, j) * b.matrix();
    return Operator(std::move(out), a.space().tensor(b.space()));
}

Operator partial_trace(const Operator& m, const std::vector<int>& keep) {
    const CompositeSpace& space = m.space();
    if (space.factor_count() < 2)
        throw std::invalid_argument("partial_trace: space has fewer than 2 factors");
    if (keep.empty() || static_cast<int>(keep.size()) >= space.factor_count())
        throw std::invalid_argument("partial_trace: keep must be a nonempty proper subset");

    const CompositeSpace out_space = space.subspace(keep); // validates indices
    std::vector<bool> kept(static_cast<std::size_t>(space.factor_count()), false);
    for (int f : keep) kept[static_cast<std::size_t>(f)] = true;

    std::vector<int> kept_factors, traced_factors;
    for (int f = 0; f < space.factor_count(); ++f)
        (kept[static_cast<std::size_t>(f)] ? kept_factors : traced_factors).push_back(f);

    const CompositeSpace traced_space = space.subspace(traced_factors);
    const int dk = out_space.total();
    const int dt = traced_space.total();

    // Row/column strides of each factor in the flat index of the full space.
    std::vector<long long> stride(static_cast<std::size_t>(space.factor_count()));
    long long acc = 1;
    for (int f = space.factor_count() - 1; f >= 0; --f) {
        stride[static_cast<std::size_t>(f)] = acc;
        acc *= space.dim(f);
    }

    // Flat offsets contributed by every kept (resp. traced) multi-index.
    auto offsets = [&](const CompositeSpace& sub, const std::vector<int>& factors) {
        std::vector<long long> off(static_cast<std::size_t>(sub.total()));
        for (int flat = 0; flat < sub.total(); ++flat) {
            const std::vector<int> multi = sub.unflatten(flat);
            long long o = 0;
            for (std::size_t k = 0; k < factors.size(); ++k)
                o += multi[k] * stride[static_cast<std::size_t>(factors[k])];
            off[static_cast<std::size_t>(flat)] = o;
        }
        return off;
    };
    const std::vector<long long> keep_off = offsets(out_space, kept_factors);
    const std::vector<long long> trace_off = offsets(traced_space, traced_factors);

    Matrix out = Matrix::Zero(dk, dk);
    for (int i = 0; i < dk; ++i)
        for (int j = 0; j < dk; ++j) {
            cxd sum = 0.0;
            for (int e = 0; e < dt; ++e)
                sum += m.matrix()(keep_off[static_cast<std::size_t>(i)] +
                                      trace_off[static_cast<std::size_t>(e)],
                                  keep_off[static_cast<std::size_t>(j)] +
                                      trace_off[static_cast<std::size_t>(e)]);
            out(i, j) = sum;
        }
    return Operator(std::move(out), out_space);
}

double phase_aligned_distance(const Operator& u, const Operator& v) {
    if (!(u.space() == v.space()))
        throw std::invalid_argument("phase_aligned_distance: operands live on different spaces");
    const cxd overlap = (v.matrix().adjoint() * u.matrix()).trace();
    const double phi = std::arg(overlap);
    return (u.matrix() - std::polar(1.0, phi) * v.matrix()).norm();
}

Operator embed_on_factors(const Operator& op, const CompositeSpace& space,
                          const std::vector<int>& targets) {
    const int nf = space.factor_count();
    const int nt = static_cast<int>(targets.size());
    if (nt == 0 || nt > nf)
        throw std::invalid_argument("embed_on_factors: bad target count");
    std::vector<bool> seen(static_cast<std::size_t>(nf), false);
    for (int k = 0; k < nt; ++k) {
        const int f = targets[static_cast<std::size_t>(k)];
        if (f < 0 || f >= nf || seen[static_cast<std::size_t>(f)])
            throw std::invalid_argument("embed_on_factors: targets must be distinct, in range");
        seen[static_cast<std::size_t>(f)] = true;
        if (op.space().dim(k) != space.dim(f))
            throw std::invalid_argument("embed_on_factors: operator factor dims do not match");
    }

    const int d = space.total();
    Matrix out = Matrix::Zero(d, d);
    std::vector<int> local_r(static_cast<std::size_t>(nt)), local_c(static_cast<std::size_t>(nt));
    for (int row = 0; row < d; ++row) {
        const std::vector<int> ridx = space.unflatten(row);
        for (int col = 0; col < d; ++col) {
            const std::vector<int> cidx = space.unflatten(col);
            bool rest_equal = true;
            for (int f = 0; f < nf && rest_equal; ++f)
                if (!seen[static_cast<std::size_t>(f)] &&
                    ridx[static_cast<std::size_t>(f)] != cidx[static_cast<std::size_t>(f)])
                    rest_equal = false;
            if (!rest_equal) continue;
            for (int k = 0; k < nt; ++k) {
                local_r[static_cast<std::size_t>(k)] =
                    ridx[static_cast<std::size_t>(targets[static_cast<std::size_t>(k)])];
                local_c[static_cast<std::size_t>(k)] =
                    cidx[static_cast<std::size_t>(targets[static_cast<std::size_t>(k)])];
            }
            out(row, col) =
                op.matrix()(op.space().flatten(local_r), op.space().flatten(local_c));
        }
    }
    return Operator(std::move(out), space);
}

} // namespace qlab
