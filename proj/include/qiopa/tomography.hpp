// Polarization-analyzer measurements, Poissonian count simulation, linear
// inversion and interference-fringe scans.
//
// Single-qubit analyzers project on
//   H, V;  D, A = (H +- V)/sqrt2;  R, L = (H +- iV)/sqrt2,
// so that D/A, R/L and H/V are the +-1 eigenstates of sigma_x, sigma_y and
// sigma_z respectively.
#pragma once

#include "qiopa/fock.hpp"
#include "qiopa/loss.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace qiopa {

enum class Analyzer : std::uint8_t { H, V, D, A, R, L };

char to_char(Analyzer a);
Analyzer analyzer_from_char(char c);
Eigen::Vector2cd analyzer_state(Analyzer a);

// One analyzer per qubit, in the qubit order of the target state.
struct AnalyzerSetting {
    std::vector<Analyzer> labels;

    std::size_t size() const { return labels.size(); }
    std::string str() const;
    static AnalyzerSetting parse(const std::string& s);
    auto operator<=>(const AnalyzerSetting&) const = default;
};

// minimal: {H, V, D, R} per qubit (4^n settings)
// overcomplete: {H, V, D, A, R, L} per qubit (6^n settings)
enum class Scheme { minimal, overcomplete };

std::vector<AnalyzerSetting> scheme_settings(Scheme scheme, int n_qubits);

struct CountEntry {
    AnalyzerSetting setting;
    double count = 0.0;  // integral when sampled; fractional for noiseless data
};

struct CountRecord {
    std::vector<std::string> labels;  // qubit labels of the measured state
    std::vector<CountEntry> entries;
    double scale = 0.0;               // expected events per unit probability
    std::uint64_t seed = 0;

    int n_qubits() const { return static_cast<int>(labels.size()); }
    // Throws IncompleteDataError if the setting is missing.
    double count(const AnalyzerSetting& s) const;
    double max_count() const;
};

// Tensor product of single-qubit analyzer projectors.
DensityMatrix projector(const AnalyzerSetting& setting);

// Born-rule probability Tr(rho P), clamped to [0, 1].
double expected_rate(const DensityMatrix& rho, const AnalyzerSetting& setting);

// Independent Poisson(scale * rate) draw per setting; setting k uses the
// substream derive_seed(seed, k).
CountRecord simulate_counts(const DensityMatrix& rho, const std::vector<AnalyzerSetting>& settings,
                            double scale, std::uint64_t seed);

// Exact expected counts scale * rate, no sampling.
CountRecord noiseless_counts(const DensityMatrix& rho, const std::vector<AnalyzerSetting>& settings,
                             double scale);

// Scale such that the largest expected count equals target_max.
double scale_for_max_count(const DensityMatrix& rho, const std::vector<AnalyzerSetting>& settings,
                           double target_max);

// Hermitian, unit-trace estimate 2^-n sum_mu T_mu sigma_mu. The result may have
// negative eigenvalues; it is returned with unphysical_allowed set.
DensityMatrix linear_inversion(const CountRecord& counts, Scheme scheme);

// Clip negative eigenvalues and renormalize.
DensityMatrix project_to_psd(const DensityMatrix& rho);

using Statistic = std::function<double(const DensityMatrix&)>;

// "trace", "purity", "min_eigenvalue", "ppt_min_eigenvalue:<label>"
Statistic named_statistic(const std::string& name);

struct BootstrapResult {
    double mean = 0.0;
    double stddev = 0.0;  // sample standard deviation (n - 1)
    int n_used = 0;
    int n_excluded = 0;   // resamples on which the statistic threw
};

// Parametric Poisson bootstrap: each resample redraws every count as
// Poisson(observed) using substream derive_seed(seed, resample index), then
// inverts and evaluates the statistic. Results do not depend on `workers`.
BootstrapResult bootstrap_errors(const CountRecord& counts, Scheme scheme,
                                 const Statistic& statistic, int n_resamples, std::uint64_t seed,
                                 int workers = 1);

enum class FringeBasis { diagonal, circular };  // {+,-} = {D,A} or {R,L}

struct FringePoint {
    double phi = 0.0;
    double rate_plus_k1 = 0.0;
    double rate_minus_k1 = 0.0;
    double rate_plus_k2 = 0.0;
    double rate_minus_k2 = 0.0;
    // Conditioning event impossible on that mode; its rates are NaN.
    bool degenerate_k1 = false;
    bool degenerate_k2 = false;

    bool degenerate() const { return degenerate_k1 || degenerate_k2; }
};

struct FringeScan {
    std::vector<FringePoint> points;
    FringeBasis basis = FringeBasis::diagonal;
};

std::vector<double> uniform_phases(int n);

// Injects 2^{-1/2}(|H> + e^{i phi}|V>) for each phi and reports the
// two-fold (mode, trigger) detection probabilities of the + and - analyzers.
FringeScan fringe_scan(const GainParams& gain, const LossSpec& loss, const std::vector<double>& phis,
                       FringeBasis basis = FringeBasis::diagonal);

// Visibility of the least-squares first-harmonic fit a + b cos(phi) + c sin(phi)
// to the + rate of a mode: sqrt(b^2 + c^2) / a, clamped to [0, 1].
double visibility(const FringeScan& scan, SpatialMode mode);

// Same fit on raw (phi, rate) samples; requires at least 8 samples.
double fitted_visibility(const std::vector<double>& phis, const std::vector<double>& rates);

// (1 + 2 tanh^2 g)^-1
double visibility_theory_k1(double g);

// (1 + v) / 2
double fidelity_from_visibility(double v);

}  // namespace qiopa
