#include "qiopa/fock.hpp"

#include "qiopa/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace qiopa {

PolarizationQubit::PolarizationQubit(complex alpha, complex beta) {
    const double norm = std::sqrt(std::norm(alpha) + std::norm(beta));
    if (!(norm > 0.0) || !std::isfinite(norm)) {
        throw InvalidArgument("polarization qubit needs a nonzero finite amplitude pair");
    }
    alpha_ = alpha / norm;
    beta_ = beta / norm;
}

PolarizationQubit PolarizationQubit::plus() {
    return {std::numbers::sqrt2 / 2, std::numbers::sqrt2 / 2};
}

PolarizationQubit PolarizationQubit::minus() {
    return {std::numbers::sqrt2 / 2, -std::numbers::sqrt2 / 2};
}

PolarizationQubit PolarizationQubit::from_phase(double phi) {
    return {std::numbers::sqrt2 / 2, std::polar(std::numbers::sqrt2 / 2, phi)};
}

PolarizationQubit bloch_rotate(const PolarizationQubit& q, Axis axis, double angle) {
    const double c = std::cos(angle / 2);
    const double s = std::sin(angle / 2);
    const complex a = q.alpha();
    const complex b = q.beta();
    const complex i{0.0, 1.0};
    switch (axis) {
        case Axis::X:
            return {c * a - i * s * b, -i * s * a + c * b};
        case Axis::Y:
            return {c * a - s * b, s * a + c * b};
        case Axis::Z:
            return {std::polar(1.0, -angle / 2) * a, std::polar(1.0, angle / 2) * b};
    }
    return q;
}

double overlap_probability(const PolarizationQubit& a, const PolarizationQubit& b) {
    return std::norm(std::conj(a.alpha()) * b.alpha() + std::conj(a.beta()) * b.beta());
}

GainParams GainParams::make(double g, Cutoff cutoff, double eps_trunc) {
    if (!(g >= 0.0) || !std::isfinite(g)) {
        throw InvalidArgument("gain g must be finite and >= 0");
    }
    if (!(eps_trunc > 0.0 && eps_trunc < 1.0)) {
        throw InvalidArgument("truncation tolerance must lie in (0, 1)");
    }
    if (cutoff.fixed && *cutoff.fixed < 0) {
        throw InvalidArgument("fixed cutoff must be >= 0");
    }
    GainParams p;
    p.g = g;
    p.gamma_cap = std::tanh(g);
    p.cutoff = cutoff;
    p.eps_trunc = eps_trunc;
    if (p.gamma_cap >= 1.0) {
        throw InvalidArgument("gain too large: tanh(g) rounds to 1");
    }
    return p;
}

SparseKet::SparseKet(std::vector<KetTerm> terms, double prune) {
    std::sort(terms.begin(), terms.end(),
              [](const KetTerm& a, const KetTerm& b) { return a.occ < b.occ; });
    for (auto& t : terms) {
        if (!terms_.empty() && terms_.back().occ == t.occ) {
            terms_.back().amp += t.amp;
        } else {
            terms_.push_back(t);
        }
    }
    std::erase_if(terms_, [prune](const KetTerm& t) { return std::abs(t.amp) <= prune; });
    if (!terms_.empty()) {
        const bool trig = terms_.front().occ.trigger.has_value();
        for (const auto& t : terms_) {
            if (t.occ.trigger.has_value() != trig) {
                throw StructuralError("ket mixes trigger-labelled and unlabelled terms");
            }
            for (int n : t.occ.n) {
                if (n < 0) throw InvalidArgument("negative photon number");
            }
        }
    }
}

bool SparseKet::has_trigger() const {
    return !terms_.empty() && terms_.front().occ.trigger.has_value();
}

double SparseKet::norm_squared() const {
    double s = 0.0;
    for (const auto& t : terms_) s += std::norm(t.amp);
    return s;
}

complex SparseKet::amplitude(const FockOccupation& occ) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), occ,
                               [](const KetTerm& t, const FockOccupation& o) { return t.occ < o; });
    if (it != terms_.end() && it->occ == occ) return it->amp;
    return 0.0;
}

complex inner_product(const SparseKet& a, const SparseKet& b) {
    if (!a.empty() && !b.empty() && a.has_trigger() != b.has_trigger()) {
        throw StructuralError("inner product between kets with and without a trigger mode");
    }
    // Merge walk over the two sorted supports.
    complex sum = 0.0;
    auto ta = a.terms();
    auto tb = b.terms();
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < ta.size() && j < tb.size()) {
        if (ta[i].occ < tb[j].occ) {
            ++i;
        } else if (tb[j].occ < ta[i].occ) {
            ++j;
        } else {
            sum += std::conj(ta[i].amp) * tb[j].amp;
            ++i;
            ++j;
        }
    }
    return sum;
}

DensityMatrix::DensityMatrix(std::vector<std::string> labels_, std::vector<int> dims_,
                             Eigen::MatrixXcd entries_)
    : labels(std::move(labels_)), dims(std::move(dims_)), entries(std::move(entries_)) {
    if (labels.size() != dims.size()) {
        throw StructuralError("density matrix needs one dimension per label");
    }
    long long prod = 1;
    for (int d : dims) {
        if (d <= 0) throw StructuralError("subsystem dimensions must be positive");
        prod *= d;
    }
    if (entries.rows() != entries.cols() || entries.rows() != prod) {
        throw StructuralError("density matrix entries do not match subsystem dimensions");
    }
}

DensityMatrix DensityMatrix::qubits(std::vector<std::string> labels, Eigen::MatrixXcd entries) {
    std::vector<int> dims(labels.size(), 2);
    return {std::move(labels), std::move(dims), std::move(entries)};
}

DensityMatrix DensityMatrix::maximally_mixed(std::vector<std::string> labels) {
    const int d = 1 << labels.size();
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(d, d) / static_cast<double>(d);
    return qubits(std::move(labels), std::move(m));
}

std::size_t DensityMatrix::subsystem(const std::string& label) const {
    auto it = std::find(labels.begin(), labels.end(), label);
    if (it == labels.end()) throw InvalidArgument("unknown subsystem label '" + label + "'");
    return static_cast<std::size_t>(it - labels.begin());
}

bool DensityMatrix::is_hermitian(double tol) const {
    return (entries - entries.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

Eigen::VectorXd DensityMatrix::eigenvalues() const {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(entries, Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

double DensityMatrix::min_eigenvalue() const { return eigenvalues().minCoeff(); }

DensityMatrix DensityMatrix::normalized() const {
    const double tr = trace().real();
    if (!(std::abs(tr) > 0.0)) throw DegenerateEventError("cannot normalize a zero-trace matrix");
    DensityMatrix out = *this;
    out.entries /= tr;
    return out;
}

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
    const int da = a.dim();
    const int db = b.dim();
    Eigen::MatrixXcd m(da * db, da * db);
    for (int i = 0; i < da; ++i) {
        for (int j = 0; j < da; ++j) {
            m.block(i * db, j * db, db, db) = a.entries(i, j) * b.entries;
        }
    }
    auto labels = a.labels;
    labels.insert(labels.end(), b.labels.begin(), b.labels.end());
    auto dims = a.dims;
    dims.insert(dims.end(), b.dims.begin(), b.dims.end());
    DensityMatrix out(std::move(labels), std::move(dims), std::move(m));
    return out;
}

namespace {

std::vector<int> unflatten(int index, const std::vector<int>& dims) {
    std::vector<int> digits(dims.size());
    for (std::size_t k = dims.size(); k-- > 0;) {
        digits[k] = index % dims[k];
        index /= dims[k];
    }
    return digits;
}

}  // namespace

DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<std::string>& keep) {
    std::vector<bool> kept(rho.labels.size(), false);
    for (const auto& label : keep) kept[rho.subsystem(label)] = true;

    std::vector<std::string> out_labels;
    std::vector<int> out_dims;
    for (std::size_t k = 0; k < rho.labels.size(); ++k) {
        if (kept[k]) {
            out_labels.push_back(rho.labels[k]);
            out_dims.push_back(rho.dims[k]);
        }
    }
    int out_dim = 1;
    for (int d : out_dims) out_dim *= d;

    const int n = rho.dim();
    std::vector<int> kept_index(n);
    std::vector<int> traced_index(n);
    for (int b = 0; b < n; ++b) {
        auto digits = unflatten(b, rho.dims);
        int ki = 0;
        int ti = 0;
        for (std::size_t k = 0; k < digits.size(); ++k) {
            if (kept[k]) {
                ki = ki * rho.dims[k] + digits[k];
            } else {
                ti = ti * rho.dims[k] + digits[k];
            }
        }
        kept_index[b] = ki;
        traced_index[b] = ti;
    }
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(out_dim, out_dim);
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) {
            if (traced_index[r] == traced_index[c]) m(kept_index[r], kept_index[c]) += rho.entries(r, c);
        }
    }
    return DensityMatrix(std::move(out_labels), std::move(out_dims), std::move(m));
}

DensityMatrix ket_to_density(const PolarizationQubit& q, std::string label) {
    Eigen::Vector2cd v(q.alpha(), q.beta());
    return DensityMatrix::qubits({std::move(label)}, v * v.adjoint());
}

DensityMatrix ket_to_density(const SparseKet& k) {
    std::vector<FockOccupation> basis;
    basis.reserve(k.size());
    for (const auto& t : k.terms()) basis.push_back(t.occ);
    return ket_to_density(k, basis);
}

DensityMatrix ket_to_density(const SparseKet& k, std::span<const FockOccupation> basis) {
    const int d = static_cast<int>(basis.size());
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(d);
    for (int b = 0; b < d; ++b) v(b) = k.amplitude(basis[b]);
    return DensityMatrix({"fock"}, {d}, v * v.adjoint());
}

std::vector<FockOccupation> joint_support(const SparseKet& a, const SparseKet& b) {
    std::vector<FockOccupation> out;
    for (const auto& t : a.terms()) out.push_back(t.occ);
    for (const auto& t : b.terms()) out.push_back(t.occ);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::string to_string(Polarization p) { return p == Polarization::H ? "H" : "V"; }

std::string to_string(Mode m) {
    switch (m) {
        case Mode::k1H: return "k1H";
        case Mode::k1V: return "k1V";
        case Mode::k2H: return "k2H";
        case Mode::k2V: return "k2V";
    }
    return "?";
}

}  // namespace qiopa
