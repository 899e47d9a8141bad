#include "qiopa/tomography.hpp"

#include "qiopa/amplifier.hpp"
#include "qiopa/analysis.hpp"
#include "qiopa/errors.hpp"
#include "qiopa/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <numeric>
#include <thread>

namespace qiopa {

char to_char(Analyzer a) {
    static constexpr char kChars[] = {'H', 'V', 'D', 'A', 'R', 'L'};
    return kChars[static_cast<int>(a)];
}

Analyzer analyzer_from_char(char c) {
    switch (c) {
        case 'H': return Analyzer::H;
        case 'V': return Analyzer::V;
        case 'D': return Analyzer::D;
        case 'A': return Analyzer::A;
        case 'R': return Analyzer::R;
        case 'L': return Analyzer::L;
        default: throw InvalidArgument(std::string("unknown analyzer label '") + c + "'");
    }
}

Eigen::Vector2cd analyzer_state(Analyzer a) {
    const double r = std::numbers::sqrt2 / 2;
    const complex i{0.0, 1.0};
    switch (a) {
        case Analyzer::H: return {1.0, 0.0};
        case Analyzer::V: return {0.0, 1.0};
        case Analyzer::D: return {r, r};
        case Analyzer::A: return {r, -r};
        case Analyzer::R: return {r, r * i};
        case Analyzer::L: return {r, -r * i};
    }
    return {1.0, 0.0};
}

std::string AnalyzerSetting::str() const {
    std::string s;
    for (Analyzer a : labels) s.push_back(to_char(a));
    return s;
}

AnalyzerSetting AnalyzerSetting::parse(const std::string& s) {
    if (s.empty()) throw InvalidArgument("empty analyzer setting");
    AnalyzerSetting out;
    for (char c : s) out.labels.push_back(analyzer_from_char(c));
    return out;
}

std::vector<AnalyzerSetting> scheme_settings(Scheme scheme, int n_qubits) {
    const std::vector<Analyzer> alphabet =
        scheme == Scheme::minimal
            ? std::vector<Analyzer>{Analyzer::H, Analyzer::V, Analyzer::D, Analyzer::R}
            : std::vector<Analyzer>{Analyzer::H, Analyzer::V, Analyzer::D,
                                    Analyzer::A, Analyzer::R, Analyzer::L};
    const int k = static_cast<int>(alphabet.size());
    int total = 1;
    for (int q = 0; q < n_qubits; ++q) total *= k;

    std::vector<AnalyzerSetting> out;
    out.reserve(total);
    for (int idx = 0; idx < total; ++idx) {
        AnalyzerSetting s;
        s.labels.resize(n_qubits);
        int rem = idx;
        for (int q = n_qubits; q-- > 0;) {
            s.labels[q] = alphabet[rem % k];
            rem /= k;
        }
        out.push_back(std::move(s));
    }
    return out;
}

double CountRecord::count(const AnalyzerSetting& s) const {
    for (const auto& e : entries) {
        if (e.setting == s) return e.count;
    }
    throw IncompleteDataError("no counts recorded for setting " + s.str());
}

double CountRecord::max_count() const {
    double m = 0.0;
    for (const auto& e : entries) m = std::max(m, e.count);
    return m;
}

DensityMatrix projector(const AnalyzerSetting& setting) {
    Eigen::MatrixXcd p = Eigen::MatrixXcd::Ones(1, 1);
    std::vector<std::string> labels;
    for (std::size_t q = 0; q < setting.size(); ++q) {
        const Eigen::Vector2cd v = analyzer_state(setting.labels[q]);
        const Eigen::Matrix2cd single = v * v.adjoint();
        Eigen::MatrixXcd next(p.rows() * 2, p.cols() * 2);
        for (int r = 0; r < p.rows(); ++r) {
            for (int c = 0; c < p.cols(); ++c) next.block(2 * r, 2 * c, 2, 2) = p(r, c) * single;
        }
        p = std::move(next);
        labels.push_back("q" + std::to_string(q));
    }
    return DensityMatrix::qubits(std::move(labels), std::move(p));
}

double expected_rate(const DensityMatrix& rho, const AnalyzerSetting& setting) {
    if (rho.dim() != (1 << setting.size())) {
        throw StructuralError("analyzer setting " + setting.str() + " does not match a " +
                              std::to_string(rho.dim()) + "-dimensional state");
    }
    const double r = (rho.entries * projector(setting).entries).trace().real();
    return std::clamp(r, 0.0, 1.0);
}

CountRecord simulate_counts(const DensityMatrix& rho, const std::vector<AnalyzerSetting>& settings,
                            double scale, std::uint64_t seed) {
    if (!(scale > 0.0)) throw InvalidArgument("count scale must be > 0");
    CountRecord rec{rho.labels, {}, scale, seed};
    rec.entries.reserve(settings.size());
    for (std::size_t k = 0; k < settings.size(); ++k) {
        const double mean = scale * expected_rate(rho, settings[k]);
        double count = 0.0;
        if (mean > 0.0) {
            Engine engine = substream(seed, k);
            std::poisson_distribution<long long> poisson(mean);
            count = static_cast<double>(poisson(engine));
        }
        rec.entries.push_back({settings[k], count});
    }
    return rec;
}

CountRecord noiseless_counts(const DensityMatrix& rho, const std::vector<AnalyzerSetting>& settings,
                             double scale) {
    if (!(scale > 0.0)) throw InvalidArgument("count scale must be > 0");
    CountRecord rec{rho.labels, {}, scale, 0};
    for (const auto& s : settings) rec.entries.push_back({s, scale * expected_rate(rho, s)});
    return rec;
}

double scale_for_max_count(const DensityMatrix& rho, const std::vector<AnalyzerSetting>& settings,
                           double target_max) {
    double max_rate = 0.0;
    for (const auto& s : settings) max_rate = std::max(max_rate, expected_rate(rho, s));
    if (!(max_rate > 0.0)) throw InvalidArgument("all analyzer settings have zero rate");
    return target_max / max_rate;
}

namespace {

enum class Pauli { I, X, Y, Z };

Eigen::Matrix2cd pauli_matrix(Pauli p) {
    const complex i{0.0, 1.0};
    Eigen::Matrix2cd m;
    switch (p) {
        case Pauli::I: m << 1, 0, 0, 1; break;
        case Pauli::X: m << 0, 1, 1, 0; break;
        case Pauli::Y: m << 0, -i, i, 0; break;
        case Pauli::Z: m << 1, 0, 0, -1; break;
    }
    return m;
}

struct Term {
    Analyzer analyzer;
    double coeff;
};

// Single-qubit Pauli expectation numerators as combinations of analyzer
// counts in the minimal {H, V, D, R} set.
std::vector<Term> minimal_terms(Pauli p) {
    switch (p) {
        case Pauli::I: return {{Analyzer::H, 1}, {Analyzer::V, 1}};
        case Pauli::X: return {{Analyzer::D, 2}, {Analyzer::H, -1}, {Analyzer::V, -1}};
        case Pauli::Y: return {{Analyzer::R, 2}, {Analyzer::H, -1}, {Analyzer::V, -1}};
        case Pauli::Z: return {{Analyzer::H, 1}, {Analyzer::V, -1}};
    }
    return {};
}

// Eigenbasis outcomes (with eigenvalue sign) for the overcomplete set; the
// identity is read off the H/V basis.
std::vector<Term> overcomplete_terms(Pauli p) {
    switch (p) {
        case Pauli::I: return {{Analyzer::H, 1}, {Analyzer::V, 1}};
        case Pauli::X: return {{Analyzer::D, 1}, {Analyzer::A, -1}};
        case Pauli::Y: return {{Analyzer::R, 1}, {Analyzer::L, -1}};
        case Pauli::Z: return {{Analyzer::H, 1}, {Analyzer::V, -1}};
    }
    return {};
}

class CountLookup {
  public:
    explicit CountLookup(const CountRecord& rec) {
        for (const auto& e : rec.entries) {
            if (!(e.count >= 0.0)) throw InvalidArgument("negative count for " + e.setting.str());
            counts_[e.setting.str()] = e.count;
        }
    }
    double operator()(const std::string& key) const {
        auto it = counts_.find(key);
        if (it == counts_.end()) throw IncompleteDataError("missing counts for setting " + key);
        return it->second;
    }

  private:
    std::map<std::string, double> counts_;
};

// Sum over the tensor expansion of per-qubit term lists.
double expand(const std::vector<std::vector<Term>>& per_qubit, const CountLookup& lookup) {
    const int n = static_cast<int>(per_qubit.size());
    std::vector<std::size_t> pos(n, 0);
    double total = 0.0;
    std::string key(n, 'H');
    while (true) {
        double coeff = 1.0;
        for (int q = 0; q < n; ++q) {
            key[q] = to_char(per_qubit[q][pos[q]].analyzer);
            coeff *= per_qubit[q][pos[q]].coeff;
        }
        total += coeff * lookup(key);
        int q = n - 1;
        while (q >= 0 && ++pos[q] == per_qubit[q].size()) {
            pos[q] = 0;
            --q;
        }
        if (q < 0) break;
    }
    return total;
}

}  // namespace

DensityMatrix linear_inversion(const CountRecord& counts, Scheme scheme) {
    const int n = counts.n_qubits();
    if (n < 1 || n > 3) throw InvalidArgument("linear inversion supports 1 to 3 qubits");
    const CountLookup lookup(counts);
    const int dim = 1 << n;

    auto terms_of = scheme == Scheme::minimal ? minimal_terms : overcomplete_terms;

    // Normalization of the minimal scheme: total over the {H,V}^n group.
    std::vector<std::vector<Term>> identity(n, minimal_terms(Pauli::I));
    const double hv_total = expand(identity, lookup);
    if (scheme == Scheme::minimal && !(hv_total > 0.0)) {
        throw IncompleteDataError("all counts in the {H,V} normalization group are zero");
    }

    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);
    const int n_strings = 1 << (2 * n);
    for (int code = 0; code < n_strings; ++code) {
        std::vector<Pauli> paulis(n);
        for (int q = 0; q < n; ++q) paulis[q] = static_cast<Pauli>((code >> (2 * (n - 1 - q))) & 3);

        std::vector<std::vector<Term>> per_qubit;
        for (Pauli p : paulis) per_qubit.push_back(terms_of(p));
        double expectation = 0.0;
        if (scheme == Scheme::minimal) {
            expectation = expand(per_qubit, lookup) / hv_total;
        } else {
            // Normalize by the total of the measurement-basis group.
            std::vector<std::vector<Term>> group;
            for (const auto& terms : per_qubit) {
                std::vector<Term> g;
                for (const auto& t : terms) g.push_back({t.analyzer, 1.0});
                group.push_back(std::move(g));
            }
            const double group_total = expand(group, lookup);
            if (!(group_total > 0.0)) {
                throw IncompleteDataError("all counts in a measurement-basis group are zero");
            }
            expectation = expand(per_qubit, lookup) / group_total;
        }

        Eigen::MatrixXcd op = Eigen::MatrixXcd::Ones(1, 1);
        for (Pauli p : paulis) {
            const Eigen::Matrix2cd s = pauli_matrix(p);
            Eigen::MatrixXcd next(op.rows() * 2, op.cols() * 2);
            for (int r = 0; r < op.rows(); ++r) {
                for (int c = 0; c < op.cols(); ++c) next.block(2 * r, 2 * c, 2, 2) = op(r, c) * s;
            }
            op = std::move(next);
        }
        rho += expectation * op;
    }
    rho /= static_cast<double>(dim);

    DensityMatrix out = DensityMatrix::qubits(counts.labels, std::move(rho));
    out.unphysical_allowed = true;
    return out;
}

DensityMatrix project_to_psd(const DensityMatrix& rho) {
    const Eigen::MatrixXcd h = 0.5 * (rho.entries + rho.entries.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
    Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0);
    const double total = ev.sum();
    if (!(total > 0.0)) throw NonPhysicalError("no positive eigenvalues to keep");
    ev /= total;
    DensityMatrix out = rho;
    out.entries = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
    out.unphysical_allowed = false;
    return out;
}

Statistic named_statistic(const std::string& name) {
    if (name == "trace") {
        return [](const DensityMatrix& r) { return r.trace().real(); };
    }
    if (name == "purity") {
        return [](const DensityMatrix& r) { return (r.entries * r.entries).trace().real(); };
    }
    if (name == "min_eigenvalue") {
        return [](const DensityMatrix& r) { return r.min_eigenvalue(); };
    }
    const std::string prefix = "ppt_min_eigenvalue:";
    if (name.starts_with(prefix)) {
        std::string label = name.substr(prefix.size());
        return [label](const DensityMatrix& r) { return ppt_min_eigenvalue(r, label); };
    }
    throw InvalidArgument("unknown statistic '" + name + "'");
}

BootstrapResult bootstrap_errors(const CountRecord& counts, Scheme scheme,
                                 const Statistic& statistic, int n_resamples, std::uint64_t seed,
                                 int workers) {
    if (n_resamples < 2) throw InvalidArgument("bootstrap needs at least 2 resamples");
    workers = std::max(1, workers);

    std::vector<double> values(n_resamples, 0.0);
    std::vector<char> ok(n_resamples, 0);

    auto run = [&](int r) {
        Engine engine = substream(seed, static_cast<std::uint64_t>(r));
        CountRecord resample = counts;
        for (auto& e : resample.entries) {
            if (e.count > 0.0) {
                std::poisson_distribution<long long> poisson(e.count);
                e.count = static_cast<double>(poisson(engine));
            }
        }
        try {
            values[r] = statistic(linear_inversion(resample, scheme));
            ok[r] = std::isfinite(values[r]) ? 1 : 0;
        } catch (const Error&) {
            ok[r] = 0;
        }
    };

    if (workers == 1) {
        for (int r = 0; r < n_resamples; ++r) run(r);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                for (int r = w; r < n_resamples; r += workers) run(r);
            });
        }
        for (auto& t : pool) t.join();
    }

    BootstrapResult res;
    double sum = 0.0;
    for (int r = 0; r < n_resamples; ++r) {
        if (ok[r]) {
            sum += values[r];
            ++res.n_used;
        }
    }
    res.n_excluded = n_resamples - res.n_used;
    if (res.n_used == 0) throw Error("statistic failed on every bootstrap resample");
    res.mean = sum / res.n_used;
    double ss = 0.0;
    for (int r = 0; r < n_resamples; ++r) {
        if (ok[r]) ss += (values[r] - res.mean) * (values[r] - res.mean);
    }
    res.stddev = res.n_used > 1 ? std::sqrt(ss / (res.n_used - 1)) : 0.0;
    return res;
}

std::vector<double> uniform_phases(int n) {
    std::vector<double> phis(n);
    for (int k = 0; k < n; ++k) phis[k] = 2.0 * std::numbers::pi * k / n;
    return phis;
}

FringeScan fringe_scan(const GainParams& gain, const LossSpec& loss, const std::vector<double>& phis,
                       FringeBasis basis) {
    if (phis.empty()) throw InvalidArgument("fringe scan needs at least one phase");
    const Analyzer plus = basis == FringeBasis::diagonal ? Analyzer::D : Analyzer::R;
    const Analyzer minus = basis == FringeBasis::diagonal ? Analyzer::A : Analyzer::L;
    const AnalyzerSetting sp{{plus}};
    const AnalyzerSetting sm{{minus}};

    FringeScan scan;
    scan.basis = basis;
    for (double phi : phis) {
        FringePoint pt;
        pt.phi = phi;
        const auto state = build_m_qubit(gain, PolarizationQubit::from_phase(phi));
        const double nan = std::numeric_limits<double>::quiet_NaN();
        try {
            const auto k1 = reduce_single_mode(state, loss, SpatialMode::k1);
            pt.rate_plus_k1 = expected_rate(k1.rho, sp);
            pt.rate_minus_k1 = expected_rate(k1.rho, sm);
        } catch (const DegenerateEventError&) {
            pt.degenerate_k1 = true;
            pt.rate_plus_k1 = pt.rate_minus_k1 = nan;
        }
        try {
            const auto k2 = reduce_single_mode(state, loss, SpatialMode::k2);
            pt.rate_plus_k2 = expected_rate(k2.rho, sp);
            pt.rate_minus_k2 = expected_rate(k2.rho, sm);
        } catch (const DegenerateEventError&) {
            pt.degenerate_k2 = true;
            pt.rate_plus_k2 = pt.rate_minus_k2 = nan;
        }
        scan.points.push_back(pt);
    }
    return scan;
}

double fitted_visibility(const std::vector<double>& phis, const std::vector<double>& rates) {
    if (phis.size() != rates.size()) throw InvalidArgument("phase and rate lists differ in length");
    if (phis.size() < 8) throw InvalidArgument("visibility fit needs at least 8 samples");
    const int n = static_cast<int>(phis.size());
    Eigen::MatrixXd design(n, 3);
    Eigen::VectorXd y(n);
    for (int k = 0; k < n; ++k) {
        design(k, 0) = 1.0;
        design(k, 1) = std::cos(phis[k]);
        design(k, 2) = std::sin(phis[k]);
        y(k) = rates[k];
    }
    const Eigen::Vector3d coef = design.colPivHouseholderQr().solve(y);
    const double offset = coef(0);
    const double amplitude = std::hypot(coef(1), coef(2));
    if (!(offset > 0.0) || amplitude <= 1e-12 * std::max(1.0, std::abs(offset))) return 0.0;
    return std::clamp(amplitude / offset, 0.0, 1.0);
}

double visibility(const FringeScan& scan, SpatialMode mode) {
    std::vector<double> phis;
    std::vector<double> rates;
    for (const auto& p : scan.points) {
        if (mode == SpatialMode::k1 ? p.degenerate_k1 : p.degenerate_k2) continue;
        phis.push_back(p.phi);
        rates.push_back(mode == SpatialMode::k1 ? p.rate_plus_k1 : p.rate_plus_k2);
    }
    return fitted_visibility(phis, rates);
}

double visibility_theory_k1(double g) {
    if (!(g >= 0.0)) throw InvalidArgument("gain must be >= 0");
    const double t = std::tanh(g);
    return 1.0 / (1.0 + 2.0 * t * t);
}

double fidelity_from_visibility(double v) {
    if (!(v >= 0.0 && v <= 1.0)) throw InvalidArgument("visibility must lie in [0, 1]");
    return 0.5 * (1.0 + v);
}

}  // namespace qiopa
