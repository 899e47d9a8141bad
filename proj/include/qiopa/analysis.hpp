// Scalar witnesses on density matrices.
#pragma once

#include "qiopa/fock.hpp"

#include <optional>
#include <string>

namespace qiopa {

// Eigenvalues above -kPsdTolerance are treated as zero when taking roots/logs.
inline constexpr double kPsdTolerance = 1e-9;
// Eigenvalues below -kNonPhysicalThreshold reject an entropy computation.
inline constexpr double kNonPhysicalThreshold = 1e-6;

DensityMatrix partial_transpose(const DensityMatrix& rho, const std::string& label);

// Minimal eigenvalue of the partial transpose on `label`; negative certifies
// entanglement across that cut.
double ppt_min_eigenvalue(const DensityMatrix& rho, const std::string& label);

// -Tr(rho log2 rho), in bits.
double von_neumann_entropy(const DensityMatrix& rho);

// Entropy of the trigger marginal of the trigger-entangled state, from the
// 2x2 Gram matrix of its two branches.
double entanglement_entropy_sigma(const GainParams& gain);

// [Tr sqrt(sqrt(a) b sqrt(a))]^2
double uhlmann_fidelity(const DensityMatrix& a, const DensityMatrix& b);

// Tr[(a - b)^2]
double hs_distance(const DensityMatrix& a, const DensityMatrix& b);

// Tr[(|a><a| - |b><b|)^2] for pure states given as kets, without forming the
// dense operators: <a|a>^2 + <b|b>^2 - 2|<a|b>|^2.
double hs_distance(const SparseKet& a, const SparseKet& b);

// Hermitian square root with small negative eigenvalues clipped to zero.
Eigen::MatrixXcd psd_sqrt(const Eigen::MatrixXcd& m);

struct WitnessReport {
    double ppt_min_eigenvalue = 0.0;
    std::string ppt_subsystem;
    double entropy_bits = 0.0;
    std::optional<double> uhlmann_fidelity;
    std::optional<double> hs_distance;
    // Free-form provenance: parameters and input descriptions.
    std::vector<std::pair<std::string, std::string>> provenance;
};

}  // namespace qiopa
