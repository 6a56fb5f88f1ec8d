#include "qlab/observable.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>
#include <string>

namespace qlab {

Observable::Observable(Operator op, std::vector<EigenPair> spectrum)
    : op_(std::move(op)), spectrum_(std::move(spectrum)) {}

const Operator* Observable::projector_for(double outcome, double match_tol) const {
    const EigenPair* best = nullptr;
    double best_gap = match_tol;
    for (const EigenPair& pair : spectrum_) {
        const double gap = std::abs(pair.value - outcome);
        if (gap <= best_gap) {
            best_gap = gap;
            best = &pair;
        }
    }
    return best ? &best->projector : nullptr;
}

Observable spectral_decomposition(const Operator& h, double cluster_tol, double hermit_tol) {
    const double defect = h.hermiticity_defect();
    if (defect > hermit_tol)
        throw std::invalid_argument("spectral_decomposition: input not hermitian (defect " +
                                    std::to_string(defect) + ")");
    // Diagonalize the hermitian average so roundoff asymmetry cannot leak in.
    const Matrix sym = 0.5 * (h.matrix() + h.matrix().adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> es(sym);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("spectral_decomposition: eigensolver failed");
    const Eigen::VectorXd vals = es.eigenvalues(); // ascending
    const Matrix vecs = es.eigenvectors();

    std::vector<Observable::EigenPair> spectrum;
    int start = 0;
    while (start < vals.size()) {
        int end = start + 1;
        // Chain-cluster: adjacent eigenvalues closer than cluster_tol merge.
        while (end < vals.size() && vals(end) - vals(end - 1) <= cluster_tol) ++end;
        const int rank = end - start;
        const Matrix block = vecs.middleCols(start, rank);
        double mean = 0.0;
        for (int k = start; k < end; ++k) mean += vals(k);
        mean /= rank;
        spectrum.push_back({mean, Operator(block * block.adjoint(), h.space())});
        start = end;
    }
    return Observable(h, std::move(spectrum));
}

} // namespace qlab
