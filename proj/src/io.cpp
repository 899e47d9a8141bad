#include "qiopa/io.hpp"

#include "qiopa/errors.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace qiopa {

std::string format_sig9(double x) {
    if (std::isnan(x)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", x);
    return buf;
}

double sig9(double x) {
    if (!std::isfinite(x)) return x;
    return std::strtod(format_sig9(x).c_str(), nullptr);
}

namespace {

json complex_json(complex z) { return json::array({sig9(z.real()), sig9(z.imag())}); }

complex complex_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2) throw StructuralError("complex value must be [re, im]");
    return {j[0].get<double>(), j[1].get<double>()};
}

// NaN has no JSON literal; emitted as null.
json number(double x) { return std::isfinite(x) ? json(sig9(x)) : json(nullptr); }

}  // namespace

json to_json(const DensityMatrix& rho) {
    json entries = json::array();
    for (int r = 0; r < rho.dim(); ++r) {
        for (int c = 0; c < rho.dim(); ++c) entries.push_back(complex_json(rho.entries(r, c)));
    }
    return {{"labels", rho.labels}, {"dim", rho.dim()}, {"entries", entries}};
}

DensityMatrix density_from_json(const json& j) {
    const auto labels = j.at("labels").get<std::vector<std::string>>();
    const int dim = j.at("dim").get<int>();
    const auto& entries = j.at("entries");
    if (dim <= 0 || entries.size() != static_cast<std::size_t>(dim) * dim) {
        throw StructuralError("density matrix JSON: entries do not match dim");
    }
    Eigen::MatrixXcd m(dim, dim);
    for (int r = 0; r < dim; ++r) {
        for (int c = 0; c < dim; ++c) m(r, c) = complex_from_json(entries[r * dim + c]);
    }
    if (labels.size() == 1) return DensityMatrix(labels, {dim}, std::move(m));
    if ((1 << labels.size()) == dim) return DensityMatrix::qubits(labels, std::move(m));
    throw StructuralError("density matrix JSON: cannot infer subsystem dimensions");
}

json to_json(const SparseKet& ket) {
    json out = json::array();
    for (const auto& t : ket.terms()) {
        json trig = t.occ.trigger ? json(to_string(*t.occ.trigger)) : json(nullptr);
        out.push_back({{"occ", t.occ.n}, {"trigger", trig}, {"amp", complex_json(t.amp)}});
    }
    return out;
}

SparseKet ket_from_json(const json& j) {
    if (!j.is_array()) throw StructuralError("ket JSON must be a list of terms");
    std::vector<KetTerm> terms;
    for (const auto& item : j) {
        KetTerm t;
        const auto occ = item.at("occ").get<std::vector<int>>();
        if (occ.size() != kNumModes) throw StructuralError("ket JSON: occ needs four entries");
        std::copy(occ.begin(), occ.end(), t.occ.n.begin());
        const auto& trig = item.at("trigger");
        if (!trig.is_null()) {
            const auto s = trig.get<std::string>();
            if (s == "H") {
                t.occ.trigger = Polarization::H;
            } else if (s == "V") {
                t.occ.trigger = Polarization::V;
            } else {
                throw StructuralError("ket JSON: trigger must be H, V or null");
            }
        }
        t.amp = complex_from_json(item.at("amp"));
        terms.push_back(t);
    }
    return SparseKet(std::move(terms));
}

json to_json(const ReducedState& r) {
    json j = to_json(r.rho);
    j["postselect_prob"] = sig9(r.postselect_prob);
    json prov = {{"g", sig9(r.provenance.g)},
                 {"eta1", sig9(r.provenance.eta1)},
                 {"eta2", sig9(r.provenance.eta2)}};
    if (r.provenance.injected) {
        prov["alpha"] = complex_json(r.provenance.injected->alpha());
        prov["beta"] = complex_json(r.provenance.injected->beta());
    } else {
        prov["alpha"] = nullptr;
        prov["beta"] = nullptr;
    }
    j["provenance"] = prov;
    return j;
}

json to_json(const WitnessReport& w) {
    json j = {{"ppt_min_eigenvalue", number(w.ppt_min_eigenvalue)},
              {"ppt_subsystem", w.ppt_subsystem},
              {"entropy_bits", number(w.entropy_bits)},
              {"uhlmann_fidelity", w.uhlmann_fidelity ? number(*w.uhlmann_fidelity) : json(nullptr)},
              {"hs_distance", w.hs_distance ? number(*w.hs_distance) : json(nullptr)}};
    json prov = json::object();
    for (const auto& [k, v] : w.provenance) prov[k] = v;
    j["provenance"] = prov;
    return j;
}

void write_counts_csv(std::ostream& os, const CountRecord& counts) {
    os << "setting,count\n";
    for (const auto& e : counts.entries) os << e.setting.str() << ',' << format_sig9(e.count) << '\n';
}

CountRecord read_counts_csv(std::istream& is, std::vector<std::string> labels) {
    std::string line;
    if (!std::getline(is, line) || line.rfind("setting,count", 0) != 0) {
        throw StructuralError("counts CSV must start with header 'setting,count'");
    }
    CountRecord rec;
    rec.labels = std::move(labels);
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw StructuralError("counts CSV row without comma: " + line);
        CountEntry e;
        e.setting = AnalyzerSetting::parse(line.substr(0, comma));
        if (static_cast<int>(e.setting.size()) != rec.n_qubits()) {
            throw StructuralError("counts CSV setting " + e.setting.str() +
                                  " does not match the number of qubits");
        }
        e.count = std::stod(line.substr(comma + 1));
        rec.entries.push_back(std::move(e));
    }
    return rec;
}

void write_fringe_csv(std::ostream& os, const FringeScan& scan) {
    os << "phi,rate_plus_k1,rate_minus_k1,rate_plus_k2,rate_minus_k2,degenerate\n";
    for (const auto& p : scan.points) {
        os << format_sig9(p.phi) << ',' << format_sig9(p.rate_plus_k1) << ','
           << format_sig9(p.rate_minus_k1) << ',' << format_sig9(p.rate_plus_k2) << ','
           << format_sig9(p.rate_minus_k2) << ',' << (p.degenerate() ? 1 : 0) << '\n';
    }
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot open '" + path + "' for writing");
    f << text;
    if (!f) throw Error("failed writing '" + path + "'");
}

}  // namespace qiopa
