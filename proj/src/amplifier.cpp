#include "qiopa/amplifier.hpp"

#include "qiopa/errors.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace qiopa {

complex gamma_coeff(const GainParams& gain, int i, int j) {
    if (i < 0 || j < 0) throw InvalidArgument("gamma indices must be >= 0");
    const double c = std::pow(std::cosh(gain.g), -3.0);
    const double G = gain.gamma_cap;
    const double sign = (i % 2 == 0) ? 1.0 : -1.0;
    return c * sign * std::pow(G, i) * std::pow(G, j);
}

double truncation_tail(const GainParams& gain, int cap) {
    // |gamma_ij|^2 (i+1) factorizes into (1-x)^2 (i+1) x^i times (1-x) x^j,
    // x = Gamma^2: a negative binomial in i and a geometric law in j.
    const double x = gain.gamma_cap * gain.gamma_cap;
    const double xn = std::pow(x, cap + 1);
    const double tail_j = xn;
    const double tail_i = (cap + 2) * xn - (cap + 1) * xn * x;
    return tail_i + tail_j - tail_i * tail_j;
}

int resolve_index_cap(const GainParams& gain) {
    if (gain.cutoff.fixed) return *gain.cutoff.fixed;
    if (truncation_tail(gain, 0) < gain.eps_trunc) return 0;

    int hi = 8;
    while (truncation_tail(gain, hi) >= gain.eps_trunc) {
        if (hi >= gain.max_index) {
            throw ConvergenceError("automatic cutoff did not reach tail " +
                                   std::to_string(gain.eps_trunc) + " below index bound " +
                                   std::to_string(gain.max_index) + " at g=" + std::to_string(gain.g));
        }
        hi = std::min(2 * hi, gain.max_index);
    }
    int lo = (hi == 8) ? 0 : hi / 2;  // tail(lo) >= eps
    while (lo + 1 < hi) {
        const int mid = (lo + hi) / 2;
        if (truncation_tail(gain, mid) < gain.eps_trunc) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return hi;
}

namespace {

enum class Branch { H, V };

std::vector<KetTerm> branch_terms(const GainParams& gain, int cap, Branch branch, complex weight,
                                  std::optional<Polarization> trigger) {
    std::vector<KetTerm> terms;
    if (weight == 0.0) return terms;
    terms.reserve(static_cast<std::size_t>(cap + 1) * (cap + 1));

    // gamma_ij built incrementally: row factor (-Gamma)^i, column factor Gamma^j.
    const double c = std::pow(std::cosh(gain.g), -3.0);
    const double G = gain.gamma_cap;
    double row = c;
    for (int i = 0; i <= cap; ++i) {
        double coeff = row;
        for (int j = 0; j <= cap; ++j) {
            FockOccupation occ;
            occ.trigger = trigger;
            double amp = 0.0;
            if (branch == Branch::H) {
                occ.n = {i + 1, j, j, i};
                amp = coeff * std::sqrt(static_cast<double>(i + 1));
            } else {
                occ.n = {i, j + 1, j, i};
                amp = coeff * std::sqrt(static_cast<double>(j + 1));
            }
            terms.push_back({occ, weight * amp});
            coeff *= G;
        }
        row *= -G;
    }
    return terms;
}

AmplifiedState make_state(const GainParams& gain, int cap, std::vector<KetTerm> terms,
                          std::optional<PolarizationQubit> injected) {
    AmplifiedState s{SparseKet(std::move(terms), gain.prune), gain, injected, cap};
    s.ket.set_gain_tag(gain);
    return s;
}

}  // namespace

AmplifiedState build_psi_h(const GainParams& gain) {
    const int cap = resolve_index_cap(gain);
    return make_state(gain, cap, branch_terms(gain, cap, Branch::H, 1.0, std::nullopt),
                      PolarizationQubit::H());
}

AmplifiedState build_psi_v(const GainParams& gain) {
    const int cap = resolve_index_cap(gain);
    return make_state(gain, cap, branch_terms(gain, cap, Branch::V, 1.0, std::nullopt),
                      PolarizationQubit::V());
}

AmplifiedState build_m_qubit(const GainParams& gain, const PolarizationQubit& q) {
    const int cap = resolve_index_cap(gain);
    auto terms = branch_terms(gain, cap, Branch::H, q.alpha(), std::nullopt);
    auto v_terms = branch_terms(gain, cap, Branch::V, q.beta(), std::nullopt);
    terms.insert(terms.end(), v_terms.begin(), v_terms.end());
    return make_state(gain, cap, std::move(terms), q);
}

AmplifiedState build_sigma(const GainParams& gain) {
    const int cap = resolve_index_cap(gain);
    const double w = std::numbers::sqrt2 / 2;
    auto terms = branch_terms(gain, cap, Branch::H, w, Polarization::H);
    auto v_terms = branch_terms(gain, cap, Branch::V, -w, Polarization::V);
    terms.insert(terms.end(), v_terms.begin(), v_terms.end());
    return make_state(gain, cap, std::move(terms), std::nullopt);
}

double mean_photons(const AmplifiedState& s, const ModeSet& modes) {
    if (modes.empty()) return 0.0;
    double total = 0.0;
    for (const auto& t : s.ket.terms()) {
        int n = 0;
        for (int m = 0; m < kNumModes; ++m) {
            if (modes.contains(static_cast<Mode>(m))) n += t.occ.n[m];
        }
        total += std::norm(t.amp) * n;
    }
    return total;
}

double mean_photons_total_closed_form(double g) {
    const double s = std::sinh(g);
    return 1.0 + 6.0 * s * s;
}

double mean_photons_k1_closed_form(double g) {
    const double s = std::sinh(g);
    return 1.0 + 3.0 * s * s;
}

}  // namespace qiopa
