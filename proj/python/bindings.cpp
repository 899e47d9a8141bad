// Python bindings: thin wrappers returning numpy arrays for density matrices.
#include "qiopa/amplifier.hpp"
#include "qiopa/analysis.hpp"
#include "qiopa/app.hpp"
#include "qiopa/loss.hpp"
#include "qiopa/tomography.hpp"

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>
#include <map>
#include <sstream>

namespace py = pybind11;
using namespace qiopa;

namespace {

GainParams gain_of(double g, std::optional<int> cutoff) {
    return GainParams::make(g, cutoff ? Cutoff::of(*cutoff) : Cutoff::automatic());
}

py::dict reduced_dict(const ReducedState& r) {
    py::dict d;
    d["rho"] = r.rho.entries;
    d["labels"] = r.rho.labels;
    d["postselect_prob"] = r.postselect_prob;
    return d;
}

DensityMatrix qubit_matrix(const Eigen::MatrixXcd& m, std::vector<std::string> labels) {
    return DensityMatrix::qubits(std::move(labels), m);
}

Scheme scheme_of(const std::string& s) {
    if (s == "minimal") return Scheme::minimal;
    if (s == "overcomplete") return Scheme::overcomplete;
    throw InvalidArgument("scheme must be 'minimal' or 'overcomplete'");
}

}  // namespace

PYBIND11_MODULE(_qiopa, m) {
    m.doc() = "Quantum-injected parametric amplifier simulator (C++ core)";

    py::register_exception<Error>(m, "QiopaError", PyExc_RuntimeError);
    py::register_exception<DegenerateEventError>(m, "DegenerateEventError", PyExc_RuntimeError);
    py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);

    py::class_<PolarizationQubit>(m, "PolarizationQubit")
        .def(py::init<complex, complex>(), py::arg("alpha"), py::arg("beta"))
        .def_static("H", &PolarizationQubit::H)
        .def_static("V", &PolarizationQubit::V)
        .def_static("plus", &PolarizationQubit::plus)
        .def_static("minus", &PolarizationQubit::minus)
        .def_static("from_phase", &PolarizationQubit::from_phase, py::arg("phi"))
        .def_property_readonly("alpha", &PolarizationQubit::alpha)
        .def_property_readonly("beta", &PolarizationQubit::beta)
        .def("__repr__", [](const PolarizationQubit& q) {
            std::ostringstream os;
            os << "PolarizationQubit(" << q.alpha() << ", " << q.beta() << ")";
            return os.str();
        });

    m.def("bloch_rotate",
          [](const PolarizationQubit& q, const std::string& axis, double angle) {
              if (axis == "X") return bloch_rotate(q, Axis::X, angle);
              if (axis == "Y") return bloch_rotate(q, Axis::Y, angle);
              if (axis == "Z") return bloch_rotate(q, Axis::Z, angle);
              throw InvalidArgument("axis must be X, Y or Z");
          },
          py::arg("qubit"), py::arg("axis"), py::arg("angle"));

    m.def("index_cap", [](double g, double eps) {
        return resolve_index_cap(GainParams::make(g, Cutoff::automatic(), eps));
    }, py::arg("g"), py::arg("epsilon_trunc") = 1e-10);

    m.def("m_qubit_terms",
          [](double g, const PolarizationQubit& q, std::optional<int> cutoff) {
              const auto s = build_m_qubit(gain_of(g, cutoff), q);
              py::list out;
              for (const auto& t : s.ket.terms()) out.append(py::make_tuple(t.occ.n, t.amp));
              return out;
          },
          py::arg("g"), py::arg("qubit"), py::arg("cutoff") = py::none(),
          "List of ((n1H, n1V, n2H, n2V), amplitude) pairs.");

    m.def("mean_photons",
          [](double g, const PolarizationQubit& q, const std::string& modes) {
              const auto s = build_m_qubit(gain_of(g, std::nullopt), q);
              if (modes == "all") return mean_photons(s, ModeSet::all());
              if (modes == "k1") return mean_photons(s, ModeSet::spatial(SpatialMode::k1));
              if (modes == "k2") return mean_photons(s, ModeSet::spatial(SpatialMode::k2));
              throw InvalidArgument("modes must be all, k1 or k2");
          },
          py::arg("g"), py::arg("qubit"), py::arg("modes") = "all");
    m.def("mean_photons_total_closed_form", &mean_photons_total_closed_form, py::arg("g"));
    m.def("mean_photons_k1_closed_form", &mean_photons_k1_closed_form, py::arg("g"));

    m.def("reduce_two_qubit",
          [](double g, double eta1, double eta2, const PolarizationQubit& q, std::optional<int> cutoff) {
              const auto s = build_m_qubit(gain_of(g, cutoff), q);
              return reduced_dict(reduce_two_qubit(s, LossSpec::make(eta1, eta2)));
          },
          py::arg("g"), py::arg("eta1"), py::arg("eta2"), py::arg("qubit"),
          py::arg("cutoff") = py::none());
    m.def("reduce_three_qubit",
          [](double g, double eta1, double eta2, std::optional<int> cutoff) {
              return reduced_dict(reduce_three_qubit(gain_of(g, cutoff), LossSpec::make(eta1, eta2)));
          },
          py::arg("g"), py::arg("eta1"), py::arg("eta2"), py::arg("cutoff") = py::none());
    m.def("brute_force_reduce_two_qubit",
          [](double g, double eta1, double eta2, const PolarizationQubit& q, int cutoff) {
              const auto s = build_m_qubit(gain_of(g, cutoff), q);
              return reduced_dict(brute_force_reduce(s, LossSpec::make(eta1, eta2)));
          },
          py::arg("g"), py::arg("eta1"), py::arg("eta2"), py::arg("qubit"), py::arg("cutoff"));

    m.def("ppt_min_eigenvalue",
          [](const Eigen::MatrixXcd& rho, std::vector<std::string> labels, const std::string& label) {
              return ppt_min_eigenvalue(qubit_matrix(rho, std::move(labels)), label);
          },
          py::arg("rho"), py::arg("labels"), py::arg("label"));
    m.def("von_neumann_entropy",
          [](const Eigen::MatrixXcd& rho) { return von_neumann_entropy(DensityMatrix({"s"}, {static_cast<int>(rho.rows())}, rho)); },
          py::arg("rho"));
    m.def("uhlmann_fidelity",
          [](const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
              const int d = static_cast<int>(a.rows());
              return uhlmann_fidelity(DensityMatrix({"s"}, {d}, a), DensityMatrix({"s"}, {d}, b));
          },
          py::arg("a"), py::arg("b"));
    m.def("entanglement_entropy_sigma",
          [](double g) { return entanglement_entropy_sigma(gain_of(g, std::nullopt)); }, py::arg("g"));
    m.def("hs_distance_h_v",
          [](double g) {
              const auto gain = gain_of(g, std::nullopt);
              return hs_distance(build_psi_h(gain).ket, build_psi_v(gain).ket);
          },
          py::arg("g"));

    m.def("visibility_theory_k1", &visibility_theory_k1, py::arg("g"));
    m.def("fidelity_from_visibility", &fidelity_from_visibility, py::arg("v"));
    m.def("fringe_visibility",
          [](double g, double eta1, double eta2, int points) {
              const auto scan = fringe_scan(gain_of(g, std::nullopt), LossSpec::make(eta1, eta2),
                                            uniform_phases(points));
              return py::make_tuple(visibility(scan, SpatialMode::k1), visibility(scan, SpatialMode::k2));
          },
          py::arg("g"), py::arg("eta1"), py::arg("eta2"), py::arg("points") = 32);

    m.def("simulate_counts",
          [](const Eigen::MatrixXcd& rho, std::vector<std::string> labels, const std::string& scheme,
             double scale, std::uint64_t seed, bool noiseless) {
              const auto dm = qubit_matrix(rho, std::move(labels));
              const auto settings = scheme_settings(scheme_of(scheme), static_cast<int>(dm.labels.size()));
              const auto rec = noiseless ? noiseless_counts(dm, settings, scale)
                                         : simulate_counts(dm, settings, scale, seed);
              py::dict out;
              for (const auto& e : rec.entries) out[py::str(e.setting.str())] = e.count;
              return out;
          },
          py::arg("rho"), py::arg("labels"), py::arg("scheme") = "minimal", py::arg("scale") = 1e4,
          py::arg("seed") = 12345, py::arg("noiseless") = false);
    m.def("linear_inversion",
          [](const std::map<std::string, double>& counts, std::vector<std::string> labels,
             const std::string& scheme) {
              CountRecord rec;
              rec.labels = std::move(labels);
              for (const auto& [k, v] : counts) rec.entries.push_back({AnalyzerSetting::parse(k), v});
              std::sort(rec.entries.begin(), rec.entries.end(),
                        [](const CountEntry& a, const CountEntry& b) { return a.setting < b.setting; });
              return linear_inversion(rec, scheme_of(scheme)).entries;
          },
          py::arg("counts"), py::arg("labels"), py::arg("scheme") = "minimal");

    m.def("run_cli",
          [](const std::vector<std::string>& args) {
              std::ostringstream out;
              std::ostringstream err;
              const int code = app::run_cli(args, out, err);
              return py::make_tuple(code, out.str(), err.str());
          },
          py::arg("args"), "Runs the CLI in-process; returns (exit_code, stdout, stderr).");
}
