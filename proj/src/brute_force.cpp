// Dense reference implementation of the lossy single-photon reduction.
#include "qiopa/errors.hpp"
#include "qiopa/loss.hpp"

#include <cmath>

namespace qiopa {

namespace {

// Basis of all occupations with every mode <= max_occ, times the trigger.
struct DenseBasis {
    int levels = 0;       // max_occ + 1
    int n_trigger = 1;    // 1 or 2
    int size() const { return n_trigger * levels * levels * levels * levels; }

    int index(int trigger, const std::array<int, kNumModes>& n) const {
        int idx = trigger;
        for (int m = 0; m < kNumModes; ++m) idx = idx * levels + n[m];
        return idx;
    }
    void decode(int idx, int& trigger, std::array<int, kNumModes>& n) const {
        for (int m = kNumModes; m-- > 0;) {
            n[m] = idx % levels;
            idx /= levels;
        }
        trigger = idx;
    }
};

double binomial(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

// rho -> sum_k K_k rho K_k^dagger with K_k removing k photons from `mode`.
Eigen::MatrixXcd apply_loss(const Eigen::MatrixXcd& rho, const DenseBasis& basis, int mode,
                            double eta) {
    const int d = basis.size();
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(d, d);
    std::vector<int> target(d);
    std::vector<double> coeff(d);
    for (int lost = 0; lost < basis.levels; ++lost) {
        for (int b = 0; b < d; ++b) {
            int t = 0;
            std::array<int, kNumModes> n{};
            basis.decode(b, t, n);
            const int count = n[mode];
            if (count < lost) {
                target[b] = -1;
                continue;
            }
            coeff[b] = std::sqrt(binomial(count, lost) * std::pow(1.0 - eta, lost) *
                                 std::pow(eta, count - lost));
            n[mode] -= lost;
            target[b] = basis.index(t, n);
        }
        for (int r = 0; r < d; ++r) {
            if (target[r] < 0 || coeff[r] == 0.0) continue;
            for (int c = 0; c < d; ++c) {
                if (target[c] < 0 || coeff[c] == 0.0) continue;
                out(target[r], target[c]) += coeff[r] * coeff[c] * rho(r, c);
            }
        }
    }
    return out;
}

}  // namespace

ReducedState brute_force_reduce(const AmplifiedState& s, const LossSpec& loss, Conditioning cond) {
    int max_occ = 0;
    for (const auto& t : s.ket.terms()) {
        for (int n : t.occ.n) max_occ = std::max(max_occ, n);
    }
    if (max_occ > kBruteForceMaxOccupation) {
        throw RefusalError("brute-force reduction supports cutoff <= 4 (occupations <= 5), got " +
                           std::to_string(max_occ));
    }

    DenseBasis basis{max_occ + 1, s.ket.has_trigger() ? 2 : 1};
    const int d = basis.size();

    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(d);
    for (const auto& t : s.ket.terms()) {
        const int trig = t.occ.trigger ? static_cast<int>(*t.occ.trigger) : 0;
        psi(basis.index(trig, t.occ.n)) = t.amp;
    }
    Eigen::MatrixXcd rho = psi * psi.adjoint();

    const bool use_k1 = cond != Conditioning::k2_only;
    const bool use_k2 = cond != Conditioning::k1_only;
    if (use_k1) {
        rho = apply_loss(rho, basis, 0, loss.eta1);
        rho = apply_loss(rho, basis, 1, loss.eta1);
    }
    if (use_k2) {
        rho = apply_loss(rho, basis, 2, loss.eta2);
        rho = apply_loss(rho, basis, 3, loss.eta2);
    }

    // Project onto one photon per analyzed spatial mode; trace out the rest.
    std::vector<std::string> labels;
    if (basis.n_trigger == 2) labels.emplace_back("trigger");
    if (use_k1) labels.emplace_back("k1");
    if (use_k2) labels.emplace_back("k2");
    const int out_dim = 1 << labels.size();

    std::vector<int> qubit(d, -1);
    std::vector<int> rest(d, 0);
    for (int b = 0; b < d; ++b) {
        int t = 0;
        std::array<int, kNumModes> n{};
        basis.decode(b, t, n);
        int q = t;
        int r = 0;
        bool keep = true;
        if (use_k1) {
            keep = keep && (n[0] + n[1] == 1);
            q = 2 * q + n[1];
        } else {
            r = r * basis.levels * basis.levels + n[0] * basis.levels + n[1];
        }
        if (use_k2) {
            keep = keep && (n[2] + n[3] == 1);
            q = 2 * q + n[3];
        } else {
            r = r * basis.levels * basis.levels + n[2] * basis.levels + n[3];
        }
        if (keep) {
            qubit[b] = q;
            rest[b] = r;
        }
    }

    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(out_dim, out_dim);
    for (int r = 0; r < d; ++r) {
        if (qubit[r] < 0) continue;
        for (int c = 0; c < d; ++c) {
            if (qubit[c] < 0 || rest[c] != rest[r]) continue;
            out(qubit[r], qubit[c]) += rho(r, c);
        }
    }
    const double prob = out.trace().real();
    if (!(prob > 0.0)) {
        throw DegenerateEventError("post-selection event has zero probability");
    }
    out /= prob;

    ReducedState result;
    result.rho = DensityMatrix::qubits(std::move(labels), std::move(out));
    result.postselect_prob = prob;
    result.provenance = {s.gain.g, loss.eta1, loss.eta2, s.injected};
    return result;
}

}  // namespace qiopa
