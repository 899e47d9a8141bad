// Output states of the quantum-injected parametric amplifier.
//
// Injecting |H> on k1 yields
//     |Psi_H> = sum_ij gamma_ij sqrt(i+1) |i+1, j, j, i>
// and injecting |V> yields
//     |Psi_V> = sum_ij gamma_ij sqrt(j+1) |i, j+1, j, i>
// with gamma_ij = cosh^-3(g) (-Gamma)^i Gamma^j and Gamma = tanh g. The two
// branches have disjoint supports, so any superposition stays normalized.
#pragma once

#include "qiopa/fock.hpp"

#include <bitset>
#include <initializer_list>
#include <optional>

namespace qiopa {

struct AmplifiedState {
    SparseKet ket;
    GainParams gain;
    // Injected qubit, or nullopt for the trigger-entangled state.
    std::optional<PolarizationQubit> injected;
    int index_cap = 0;

    bool is_sigma() const { return !injected.has_value(); }
};

// Subset of the four field modes.
class ModeSet {
  public:
    ModeSet() = default;
    ModeSet(std::initializer_list<Mode> modes) {
        for (Mode m : modes) bits_.set(static_cast<int>(m));
    }
    static ModeSet all() { return {Mode::k1H, Mode::k1V, Mode::k2H, Mode::k2V}; }
    static ModeSet spatial(SpatialMode s) {
        return s == SpatialMode::k1 ? ModeSet{Mode::k1H, Mode::k1V} : ModeSet{Mode::k2H, Mode::k2V};
    }
    bool contains(Mode m) const { return bits_.test(static_cast<int>(m)); }
    bool empty() const { return bits_.none(); }

  private:
    std::bitset<kNumModes> bits_;
};

complex gamma_coeff(const GainParams& gain, int i, int j);

// Probability mass of the expansion discarded when i, j <= cap.
double truncation_tail(const GainParams& gain, int cap);

// Index cap used for the (i, j) sums: the fixed cutoff, or the smallest cap
// whose tail is below eps_trunc. Throws ConvergenceError past max_index.
int resolve_index_cap(const GainParams& gain);

AmplifiedState build_psi_h(const GainParams& gain);
AmplifiedState build_psi_v(const GainParams& gain);
AmplifiedState build_m_qubit(const GainParams& gain, const PolarizationQubit& q);

// 2^{-1/2}(|H>_T |Psi_H> - |V>_T |Psi_V>)
AmplifiedState build_sigma(const GainParams& gain);

double mean_photons(const AmplifiedState& s, const ModeSet& modes);

// Closed forms for the lossless state: 1 + 6 sinh^2 g over all modes and
// 1 + 3 sinh^2 g on the cloning mode.
double mean_photons_total_closed_form(double g);
double mean_photons_k1_closed_form(double g);

}  // namespace qiopa
