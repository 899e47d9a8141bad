#include "qiopa/analysis.hpp"

#include "qiopa/amplifier.hpp"
#include "qiopa/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qiopa {

namespace {

void require_same_dim(const DensityMatrix& a, const DensityMatrix& b) {
    if (a.dim() != b.dim()) {
        throw StructuralError("density matrices differ in dimension (" + std::to_string(a.dim()) +
                              " vs " + std::to_string(b.dim()) + ")");
    }
}

Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eigensolve(const Eigen::MatrixXcd& m) {
    // Average with the adjoint so tiny asymmetries from noisy input cannot leak in.
    Eigen::MatrixXcd h = 0.5 * (m + m.adjoint());
    return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(h);
}

}  // namespace

DensityMatrix partial_transpose(const DensityMatrix& rho, const std::string& label) {
    const std::size_t k = rho.subsystem(label);
    const int n = rho.dim();
    // Strides for subsystem k in the row-major tensor index.
    int inner = 1;
    for (std::size_t s = k + 1; s < rho.dims.size(); ++s) inner *= rho.dims[s];
    const int dk = rho.dims[k];

    Eigen::MatrixXcd out(n, n);
    for (int r = 0; r < n; ++r) {
        const int rk = (r / inner) % dk;
        for (int c = 0; c < n; ++c) {
            const int ck = (c / inner) % dk;
            const int r2 = r + (ck - rk) * inner;
            const int c2 = c + (rk - ck) * inner;
            out(r2, c2) = rho.entries(r, c);
        }
    }
    DensityMatrix pt(rho.labels, rho.dims, std::move(out));
    pt.unphysical_allowed = true;
    return pt;
}

double ppt_min_eigenvalue(const DensityMatrix& rho, const std::string& label) {
    return eigensolve(partial_transpose(rho, label).entries).eigenvalues().minCoeff();
}

double von_neumann_entropy(const DensityMatrix& rho) {
    const Eigen::VectorXd ev = eigensolve(rho.entries).eigenvalues();
    if (ev.minCoeff() < -kNonPhysicalThreshold) {
        throw NonPhysicalError("entropy of a matrix with eigenvalue " + std::to_string(ev.minCoeff()));
    }
    double s = 0.0;
    for (double lambda : ev) {
        if (lambda > 0.0) s -= lambda * std::log2(lambda);
    }
    return s;
}

double entanglement_entropy_sigma(const GainParams& gain) {
    const auto sigma = build_sigma(gain);
    // Split the ket into its trigger-H and trigger-V branches (same Fock labels).
    std::vector<KetTerm> h_terms;
    std::vector<KetTerm> v_terms;
    for (const auto& t : sigma.ket.terms()) {
        KetTerm stripped{t.occ, t.amp};
        stripped.occ.trigger.reset();
        (*t.occ.trigger == Polarization::H ? h_terms : v_terms).push_back(stripped);
    }
    const SparseKet h(std::move(h_terms));
    const SparseKet v(std::move(v_terms));
    Eigen::Matrix2cd gram;
    gram(0, 0) = inner_product(h, h);
    gram(0, 1) = inner_product(v, h);
    gram(1, 0) = inner_product(h, v);
    gram(1, 1) = inner_product(v, v);
    auto rho_t = DensityMatrix::qubits({"trigger"}, gram).normalized();
    return von_neumann_entropy(rho_t);
}

namespace {

// Eigenvalues this close to zero are rounding noise of a singular matrix;
// their square roots (~1e-8) would otherwise leak into fidelities.
double rounding_floor(const Eigen::VectorXd& ev) {
    return 16.0 * ev.size() * std::numeric_limits<double>::epsilon() * ev.cwiseAbs().maxCoeff();
}

}  // namespace

Eigen::MatrixXcd psd_sqrt(const Eigen::MatrixXcd& m) {
    const auto es = eigensolve(m);
    Eigen::VectorXd ev = es.eigenvalues();
    if (ev.minCoeff() < -kNonPhysicalThreshold) {
        throw NonPhysicalError("square root of a matrix with eigenvalue " +
                               std::to_string(ev.minCoeff()));
    }
    const double floor = rounding_floor(ev);
    for (double& lambda : ev) lambda = lambda > floor ? std::sqrt(lambda) : 0.0;
    return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

double uhlmann_fidelity(const DensityMatrix& a, const DensityMatrix& b) {
    require_same_dim(a, b);
    if (b.min_eigenvalue() < -kNonPhysicalThreshold) {
        throw NonPhysicalError("fidelity argument is not positive semidefinite");
    }
    const Eigen::MatrixXcd sa = psd_sqrt(a.entries);
    const Eigen::MatrixXcd inner = sa * b.entries * sa;
    const Eigen::VectorXd ev = eigensolve(inner).eigenvalues();
    const double floor = rounding_floor(ev);
    double tr = 0.0;
    for (double lambda : ev) {
        if (lambda > floor) tr += std::sqrt(lambda);
    }
    return std::clamp(tr * tr, 0.0, 1.0);
}

double hs_distance(const DensityMatrix& a, const DensityMatrix& b) {
    require_same_dim(a, b);
    const Eigen::MatrixXcd diff = a.entries - b.entries;
    return (diff * diff).trace().real();
}

double hs_distance(const SparseKet& a, const SparseKet& b) {
    const double na = a.norm_squared();
    const double nb = b.norm_squared();
    return na * na + nb * nb - 2.0 * std::norm(inner_product(a, b));
}

}  // namespace qiopa
