#include "qlab/measure.hpp"

#include <cmath>
#include <string>

#include "qlab/random.hpp"

namespace qlab::measure {

MeasureOutcome selective_measure(const Operator& rho, const Observable& obs, double outcome,
                                 double match_tol, double prob_floor) {
    if (!(rho.space() == obs.op().space()))
        throw std::invalid_argument("selective_measure: state and observable spaces differ");
    const Operator* proj = obs.projector_for(outcome, match_tol);
    if (!proj)
        throw std::invalid_argument("selective_measure: outcome " + std::to_string(outcome) +
                                    " is not in the spectrum");
    const double p = std::real((rho.matrix() * proj->matrix()).trace());
    if (p <= prob_floor)
        throw impossible_outcome("selective_measure: outcome " + std::to_string(outcome) +
                                 " has probability " + std::to_string(p));
    Matrix post = (proj->matrix() * rho.matrix() * proj->matrix()) / p;
    // trace renormalized exactly to kill the last-bit drift of the division
    post /= post.trace().real();
    return {Operator(std::move(post), rho.space()), p};
}

Operator nonselective_measure(const Operator& rho, const Observable& obs) {
    if (!(rho.space() == obs.op().space()))
        throw std::invalid_argument("nonselective_measure: state and observable spaces differ");
    Matrix out = Matrix::Zero(rho.dim(), rho.dim());
    for (const auto& pair : obs.spectrum())
        out += pair.projector.matrix() * rho.matrix() * pair.projector.matrix();
    return Operator(std::move(out), rho.space());
}

namespace {

// Leading-factor split: returns the number of leading factors of `full` that
// realize the basis space; throws if the dims do not line up or nothing is
// left over for the environment.
int system_factor_count(const CompositeSpace& full, const Basis& basis) {
    const std::vector<int>& sd = basis.space().dims();
    const std::vector<int>& fd = full.dims();
    if (sd.size() >= fd.size())
        throw std::invalid_argument("system/environment split: no environment factors left");
    for (std::size_t k = 0; k < sd.size(); ++k)
        if (fd[k] != sd[k])
            throw std::invalid_argument(
                "system/environment split: leading factor dimensions do not match basis");
    return static_cast<int>(sd.size());
}

// Unnormalized conditional environment vectors (⟨b_i| ⊗ 1)|ψ⟩, one column per
// basis vector. With the system factors leading, psi reshapes to an S×E
// matrix row-major, so the conditionals are rows of B† · reshaped.
Matrix environment_vectors(const StateVector& psi, const Basis& basis) {
    const int ns = system_factor_count(psi.space(), basis);
    const int ds = basis.space().total();
    const int de = psi.space().total() / ds;
    Eigen::Map<const Eigen::Matrix<cxd, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
        reshaped(psi.amplitudes().data(), ds, de);
    (void)ns;
    Matrix rows = basis.columns().adjoint() * reshaped; // ds × de
    return rows.transpose();                            // de × ds, column i = Ẽ_i
}

} // namespace

EtaReport decoherence_eta(const StateVector& psi, const Basis& basis, double weight_threshold) {
    const Matrix env = environment_vectors(psi, basis);
    const int n = static_cast<int>(env.cols());

    EtaReport report;
    report.basis_label = basis.name();
    report.weights.resize(static_cast<std::size_t>(n));
    report.pairwise_overlaps = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) report.weights[static_cast<std::size_t>(i)] = env.col(i).norm();

    int surviving = 0;
    for (double w : report.weights)
        if (w > weight_threshold) ++surviving;
    if (surviving <= 1) return report; // eta = 0 by convention

    double eta = 0.0;
    for (int i = 0; i < n; ++i) {
        const double wi = report.weights[static_cast<std::size_t>(i)];
        if (wi <= weight_threshold) continue;
        for (int j = i + 1; j < n; ++j) {
            const double wj = report.weights[static_cast<std::size_t>(j)];
            if (wj <= weight_threshold) continue;
            const double overlap = std::abs(env.col(i).dot(env.col(j))) / (wi * wj);
            report.pairwise_overlaps(i, j) = overlap;
            report.pairwise_overlaps(j, i) = overlap;
            eta = std::max(eta, overlap);
        }
    }
    report.eta = eta;
    return report;
}

bool is_recorded(const StateVector& psi, const Basis& basis, double tol) {
    return decoherence_eta(psi, basis).eta <= tol;
}

bool is_conserved_basis(const Evolution& u, const CompositeSpace& full_space,
                        const StateVector& e0, const Basis& basis, double tol) {
    const int ns = system_factor_count(full_space, basis);
    std::vector<int> s_factors(static_cast<std::size_t>(ns));
    for (int f = 0; f < ns; ++f) s_factors[static_cast<std::size_t>(f)] = f;
    for (int i = 0; i < basis.size(); ++i) {
        const StateVector in = basis.vector(i).tensor(e0);
        if (!(in.space() == full_space))
            throw std::invalid_argument("is_conserved_basis: e0 space does not complete the split");
        const StateVector out = u(in);
        const Operator rho_s = reduced_density(out, s_factors);
        const Matrix expect = basis.columns().col(i) * basis.columns().col(i).adjoint();
        if ((rho_s.matrix() - expect).cwiseAbs().maxCoeff() > tol) return false;
    }
    return true;
}

bool is_conserved_basis(const Operator& u, const StateVector& e0, const Basis& basis,
                        double tol) {
    const CompositeSpace full = u.space();
    Evolution ev = [&u](const StateVector& psi) {
        if (psi.dim() != u.dim())
            throw std::invalid_argument("is_conserved_basis: state/operator dimension mismatch");
        return StateVector(u.matrix() * psi.amplitudes(), psi.space());
    };
    return is_conserved_basis(ev, full, e0, basis, tol);
}

ProcessReport is_measurement_process(const Evolution& u, const CompositeSpace& full_space,
                                     const StateVector& e0, const Basis& basis, double tol,
                                     int sample_count, std::uint64_t seed) {
    system_factor_count(full_space, basis); // validate the split early
    const int n = basis.size();

    std::vector<StateVector> probes;
    for (int i = 0; i < n; ++i) probes.push_back(basis.vector(i));
    const cxd phases[4] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            for (const cxd p : phases)
                probes.emplace_back(
                    Vector(basis.columns().col(i) + p * basis.columns().col(j)),
                    basis.space());
    for (int k = 0; k < sample_count; ++k)
        probes.push_back(random_pure(basis.space(),
                                     derive_seed(seed, "process-probe-" + std::to_string(k))));

    ProcessReport report;
    report.nonselective = true;
    for (const StateVector& probe : probes) {
        const StateVector out = u(probe.tensor(e0));
        if (!is_recorded(out, basis, tol)) {
            report.nonselective = false;
            report.witnesses.push_back(probe);
        }
    }
    report.projective =
        report.nonselective && is_conserved_basis(u, full_space, e0, basis, tol);
    return report;
}

ProcessReport is_measurement_process(const Operator& u, const StateVector& e0,
                                     const Basis& basis, double tol, int sample_count,
                                     std::uint64_t seed) {
    Evolution ev = [&u](const StateVector& psi) {
        if (psi.dim() != u.dim())
            throw std::invalid_argument("is_measurement_process: state/operator dimension mismatch");
        return StateVector(u.matrix() * psi.amplitudes(), psi.space());
    };
    return is_measurement_process(ev, u.space(), e0, basis, tol, sample_count, seed);
}

} // namespace qlab::measure
