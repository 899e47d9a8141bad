#include "qiopa/loss.hpp"

#include "qiopa/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace qiopa {

LossSpec LossSpec::make(double eta1, double eta2) {
    for (double e : {eta1, eta2}) {
        if (!(e > 0.0 && e <= 1.0)) {
            throw InvalidArgument("transmission eta must lie in (0, 1], got " + std::to_string(e));
        }
    }
    return {eta1, eta2};
}

namespace {

constexpr int kMaxQubits = 3;
using Amplitudes = std::array<complex, 1 << kMaxQubits>;
using LostPattern = std::array<int, kNumModes>;

bool conditions(Conditioning cond, SpatialMode s) {
    switch (cond) {
        case Conditioning::both: return true;
        case Conditioning::k1_only: return s == SpatialMode::k1;
        case Conditioning::k2_only: return s == SpatialMode::k2;
    }
    return false;
}

// Amplitude for `survive` of `n` photons to pass a beam splitter of
// transmission eta (the rest going to the environment).
double transmission_amplitude(int n, int survive, double eta) {
    const int lost = n - survive;
    if (survive == 0) return std::pow(1.0 - eta, 0.5 * lost);
    // survive == 1
    return std::sqrt(n * eta * std::pow(1.0 - eta, lost));
}

std::vector<std::string> output_labels(bool trigger, Conditioning cond) {
    std::vector<std::string> labels;
    if (trigger) labels.emplace_back("trigger");
    if (conditions(cond, SpatialMode::k1)) labels.emplace_back("k1");
    if (conditions(cond, SpatialMode::k2)) labels.emplace_back("k2");
    return labels;
}

Provenance provenance_of(const GainParams& gain, const LossSpec& loss,
                         std::optional<PolarizationQubit> injected) {
    return {gain.g, loss.eta1, loss.eta2, injected};
}

}  // namespace

ReducedState reduce_ket(const SparseKet& ket, const LossSpec& loss, Conditioning cond) {
    const bool trigger = ket.has_trigger();
    const auto labels = output_labels(trigger, cond);
    const int n_qubits = static_cast<int>(labels.size());
    const int dim = 1 << n_qubits;

    std::vector<SpatialMode> analyzed;
    for (SpatialMode s : {SpatialMode::k1, SpatialMode::k2}) {
        if (conditions(cond, s)) analyzed.push_back(s);
    }

    // Surviving photon choices: one polarization per analyzed spatial mode.
    const int n_choices = 1 << analyzed.size();

    std::map<LostPattern, Amplitudes> branches;
    for (const auto& term : ket.terms()) {
        const auto& occ = term.occ;
        for (int choice = 0; choice < n_choices; ++choice) {
            std::array<int, kNumModes> survive{};
            int qubit_index = trigger ? static_cast<int>(*occ.trigger) : 0;
            bool feasible = true;
            for (std::size_t a = 0; a < analyzed.size(); ++a) {
                const int pol = (choice >> (analyzed.size() - 1 - a)) & 1;
                const int mode = 2 * static_cast<int>(analyzed[a]) + pol;
                if (occ.n[mode] == 0) {
                    feasible = false;
                    break;
                }
                survive[mode] = 1;
                qubit_index = 2 * qubit_index + pol;
            }
            if (!feasible) continue;

            complex amp = term.amp;
            LostPattern lost{};
            for (int m = 0; m < kNumModes; ++m) {
                lost[m] = occ.n[m] - survive[m];
                const auto spatial = static_cast<SpatialMode>(m / 2);
                // Unconditioned spatial modes are traced out whole.
                if (conditions(cond, spatial)) {
                    amp *= transmission_amplitude(occ.n[m], survive[m], loss.eta(spatial));
                }
            }
            auto [it, inserted] = branches.try_emplace(lost);
            if (inserted) it->second.fill(0.0);
            it->second[qubit_index] += amp;
        }
    }

    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);
    for (const auto& [lost, amps] : branches) {
        Eigen::Map<const Eigen::VectorXcd> v(amps.data(), dim);
        rho.noalias() += v * v.adjoint();
    }
    const double prob = rho.trace().real();
    if (!(prob >= std::numeric_limits<double>::min())) {
        throw DegenerateEventError(
            "post-selection event has zero probability (no photon can reach every analyzed mode)");
    }
    rho /= prob;

    ReducedState out;
    out.rho = DensityMatrix::qubits(labels, std::move(rho));
    out.postselect_prob = prob;
    return out;
}

ReducedState reduce_two_qubit(const AmplifiedState& s, const LossSpec& loss) {
    if (s.ket.has_trigger()) {
        throw StructuralError("two-qubit reduction expects a state without trigger mode");
    }
    auto out = reduce_ket(s.ket, loss, Conditioning::both);
    out.provenance = provenance_of(s.gain, loss, s.injected);
    return out;
}

ReducedState reduce_three_qubit(const GainParams& gain, const LossSpec& loss) {
    const auto sigma = build_sigma(gain);
    auto out = reduce_ket(sigma.ket, loss, Conditioning::both);
    out.provenance = provenance_of(gain, loss, std::nullopt);
    return out;
}

ReducedState reduce_single_mode(const AmplifiedState& s, const LossSpec& loss, SpatialMode mode) {
    auto out = reduce_ket(s.ket, loss,
                          mode == SpatialMode::k1 ? Conditioning::k1_only : Conditioning::k2_only);
    out.provenance = provenance_of(s.gain, loss, s.injected);
    return out;
}

}  // namespace qiopa
