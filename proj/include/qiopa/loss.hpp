// Attenuation of the amplified field to the single-photon level followed by
// post-selection of one surviving photon per analyzed spatial mode.
//
// Each photon of mode k_i survives independently with probability eta_i.
// Lost photons are traced out: two source terms contribute coherently to the
// reduced state only if they left identical lost-photon patterns behind.
#pragma once

#include "qiopa/amplifier.hpp"
#include "qiopa/fock.hpp"

#include <optional>

namespace qiopa {

struct LossSpec {
    double eta1 = 1.0;
    double eta2 = 1.0;

    // Throws InvalidArgument unless both values lie in (0, 1].
    static LossSpec make(double eta1, double eta2);
    double eta(SpatialMode s) const { return s == SpatialMode::k1 ? eta1 : eta2; }
};

// Which spatial modes must hold exactly one surviving photon.
enum class Conditioning { both, k1_only, k2_only };

struct Provenance {
    double g = 0.0;
    double eta1 = 1.0;
    double eta2 = 1.0;
    std::optional<PolarizationQubit> injected;  // nullopt for the trigger-entangled state
};

// Qubit order: [trigger], then k1, then k2 (conditioned modes only); H = 0, V = 1.
struct ReducedState {
    DensityMatrix rho;
    double postselect_prob = 0.0;
    Provenance provenance;
};

// rho on (k1, k2) for a four-mode state.
ReducedState reduce_two_qubit(const AmplifiedState& s, const LossSpec& loss);

// rho' on (trigger, k1, k2) built from the trigger-entangled state.
ReducedState reduce_three_qubit(const GainParams& gain, const LossSpec& loss);

// Polarization of the single photon surviving on one spatial mode, the other
// spatial mode traced out unconditionally (two-fold coincidence with the trigger).
ReducedState reduce_single_mode(const AmplifiedState& s, const LossSpec& loss, SpatialMode mode);

// Shared implementation over any ket (with or without trigger).
ReducedState reduce_ket(const SparseKet& ket, const LossSpec& loss, Conditioning cond);

// Exhaustive reference: dense density operator over the truncated Fock space,
// loss applied as a per-mode operator sum, projection and partial trace.
// Refuses states with any occupation above kBruteForceMaxOccupation.
inline constexpr int kBruteForceMaxOccupation = 5;
ReducedState brute_force_reduce(const AmplifiedState& s, const LossSpec& loss,
                                Conditioning cond = Conditioning::both);

}  // namespace qiopa
