// Truncated Fock-space kets, dense density matrices and polarization qubits
// over the four amplifier modes (k1H, k1V, k2H, k2V) plus an optional trigger.
#pragma once

#include <Eigen/Dense>

#include <array>
#include <compare>
#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace qiopa {

using complex = std::complex<double>;

enum class Polarization : std::uint8_t { H = 0, V = 1 };

// Field modes in storage order. |H>_k1 is |1,0,0,0>.
enum class Mode : std::uint8_t { k1H = 0, k1V = 1, k2H = 2, k2V = 3 };
inline constexpr int kNumModes = 4;

enum class SpatialMode : std::uint8_t { k1 = 0, k2 = 1 };

enum class Axis : std::uint8_t { X, Y, Z };

// alpha|H> + beta|V>, kept normalized.
class PolarizationQubit {
  public:
    PolarizationQubit(complex alpha, complex beta);

    static PolarizationQubit H() { return {1.0, 0.0}; }
    static PolarizationQubit V() { return {0.0, 1.0}; }
    static PolarizationQubit plus();
    static PolarizationQubit minus();
    // 2^{-1/2}(|H> + e^{i phi}|V>)
    static PolarizationQubit from_phase(double phi);

    complex alpha() const { return alpha_; }
    complex beta() const { return beta_; }

  private:
    complex alpha_;
    complex beta_;
};

// Rotation exp(-i angle sigma_axis / 2) on the polarization Bloch sphere.
PolarizationQubit bloch_rotate(const PolarizationQubit& q, Axis axis, double angle);

// |<a|b>|^2 for qubits.
double overlap_probability(const PolarizationQubit& a, const PolarizationQubit& b);

struct FockOccupation {
    std::array<int, kNumModes> n{};
    std::optional<Polarization> trigger;

    int operator[](Mode m) const { return n[static_cast<int>(m)]; }
    int total() const { return n[0] + n[1] + n[2] + n[3]; }

    // Trigger-less occupations sort before any trigger-labelled one.
    auto operator<=>(const FockOccupation&) const = default;
};

// Cutoff on the (i, j) summation indices of the amplifier expansion.
struct Cutoff {
    std::optional<int> fixed;  // nullopt means automatic

    static Cutoff automatic() { return {}; }
    static Cutoff of(int n) { return Cutoff{n}; }
    bool is_auto() const { return !fixed.has_value(); }
};

struct GainParams {
    double g = 0.0;
    double gamma_cap = 0.0;  // tanh g
    Cutoff cutoff;
    double eps_trunc = 1e-10;
    double prune = 0.0;
    int max_index = 1024;

    // Validates g >= 0, eps in (0, 1), fixed cutoff >= 0.
    static GainParams make(double g, Cutoff cutoff = Cutoff::automatic(),
                           double eps_trunc = 1e-10);
};

struct KetTerm {
    FockOccupation occ;
    complex amp;
};

// Sparse ket with terms sorted by occupation. Either every term carries a
// trigger label or none does.
class SparseKet {
  public:
    SparseKet() = default;
    // Sorts, merges duplicates and drops amplitudes with |amp| <= prune.
    explicit SparseKet(std::vector<KetTerm> terms, double prune = 0.0);

    std::span<const KetTerm> terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }
    bool empty() const { return terms_.empty(); }
    bool has_trigger() const;
    double norm_squared() const;
    // Amplitude of an occupation, zero if absent.
    complex amplitude(const FockOccupation& occ) const;

    const std::optional<GainParams>& gain_tag() const { return gain_tag_; }
    void set_gain_tag(const GainParams& gain) { gain_tag_ = gain; }

  private:
    std::vector<KetTerm> terms_;
    std::optional<GainParams> gain_tag_;
};

complex inner_product(const SparseKet& a, const SparseKet& b);

// Dense matrix over a tensor product of labelled subsystems.
struct DensityMatrix {
    std::vector<std::string> labels;
    std::vector<int> dims;
    Eigen::MatrixXcd entries;
    // Set on linear-inversion output that may carry negative eigenvalues.
    bool unphysical_allowed = false;

    DensityMatrix() = default;
    DensityMatrix(std::vector<std::string> labels, std::vector<int> dims,
                  Eigen::MatrixXcd entries);
    // One qubit per label.
    static DensityMatrix qubits(std::vector<std::string> labels, Eigen::MatrixXcd entries);
    static DensityMatrix maximally_mixed(std::vector<std::string> labels);

    int dim() const { return static_cast<int>(entries.rows()); }
    complex trace() const { return entries.trace(); }
    std::size_t subsystem(const std::string& label) const;
    bool is_hermitian(double tol = 1e-10) const;
    Eigen::VectorXd eigenvalues() const;
    double min_eigenvalue() const;
    DensityMatrix normalized() const;
};

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b);

// Trace out every subsystem not listed in keep (kept in their original order).
DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<std::string>& keep);

DensityMatrix ket_to_density(const PolarizationQubit& q, std::string label = "q");

// |k><k| in the basis of the occupations k actually stores (term order).
DensityMatrix ket_to_density(const SparseKet& k);

// |k><k| expressed in an explicit occupation basis.
DensityMatrix ket_to_density(const SparseKet& k, std::span<const FockOccupation> basis);

// Sorted union of the occupations of two kets.
std::vector<FockOccupation> joint_support(const SparseKet& a, const SparseKet& b);

std::string to_string(Polarization p);
std::string to_string(Mode m);

}  // namespace qiopa
