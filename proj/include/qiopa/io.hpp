// JSON and CSV encodings of the simulator's data products.
//
// Density matrix: {"labels": [...], "dim": d, "entries": [[re, im], ...]} row-major.
// Ket: [{"occ": [n1H, n1V, n2H, n2V], "trigger": "H"|"V"|null, "amp": [re, im]}, ...]
// Counts CSV: "setting,count", setting as concatenated analyzer labels.
// Fringe CSV: "phi,rate_plus_k1,rate_minus_k1,rate_plus_k2,rate_minus_k2,degenerate".
// Floating-point values are written with 9 significant digits.
#pragma once

#include "qiopa/analysis.hpp"
#include "qiopa/fock.hpp"
#include "qiopa/loss.hpp"
#include "qiopa/tomography.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>

namespace qiopa {

using json = nlohmann::json;

// x rounded to 9 significant digits (the value that "%.9g" prints).
double sig9(double x);
std::string format_sig9(double x);

json to_json(const DensityMatrix& rho);
DensityMatrix density_from_json(const json& j);

json to_json(const SparseKet& ket);
SparseKet ket_from_json(const json& j);

json to_json(const ReducedState& r);
json to_json(const WitnessReport& w);

void write_counts_csv(std::ostream& os, const CountRecord& counts);
// Labels are not stored in the CSV; pass the qubit labels of the measured state.
CountRecord read_counts_csv(std::istream& is, std::vector<std::string> labels);

void write_fringe_csv(std::ostream& os, const FringeScan& scan);

// Writes text to a file, throwing Error on failure.
void write_text_file(const std::string& path, const std::string& text);

}  // namespace qiopa
