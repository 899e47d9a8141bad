#include "oracle.hpp"
#include "qiopa/analysis.hpp"
#include "qiopa/errors.hpp"
#include "qiopa/loss.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace qiopa;

namespace {

double max_abs_diff(const DensityMatrix& a, const DensityMatrix& b) {
    REQUIRE(a.dim() == b.dim());
    return (a.entries - b.entries).cwiseAbs().maxCoeff();
}

const std::vector<PolarizationQubit>& grid_qubits() {
    static const std::vector<PolarizationQubit> q = {
        PolarizationQubit::H(), PolarizationQubit::V(), PolarizationQubit::plus(),
        PolarizationQubit(complex(0.6, 0.1), complex(-0.3, 0.7))};
    return q;
}

const std::vector<LossSpec>& grid_losses() {
    static const std::vector<LossSpec> l = {LossSpec::make(0.5, 0.5), LossSpec::make(0.2, 0.7),
                                            LossSpec::make(0.049, 0.042)};
    return l;
}

}  // namespace

TEST_CASE("loss spec validation") {
    CHECK_THROWS_AS(LossSpec::make(0.0, 0.5), InvalidArgument);
    CHECK_THROWS_AS(LossSpec::make(0.5, 1.5), InvalidArgument);
    CHECK(LossSpec::make(1.0, 1.0).eta(SpatialMode::k2) == 1.0);
}

TEST_CASE("fast reduction agrees with the brute-force oracle") {
    int combos = 0;
    for (double g : {0.1, 0.3, 0.7}) {
        const auto gp = GainParams::make(g, Cutoff::of(3));
        for (const auto& q : grid_qubits()) {
            const auto s = build_m_qubit(gp, q);
            for (const auto& loss : grid_losses()) {
                CAPTURE(g);
                CAPTURE(loss.eta1);
                CAPTURE(loss.eta2);
                const auto fast = reduce_two_qubit(s, loss);
                const auto slow = brute_force_reduce(s, loss);
                CHECK(max_abs_diff(fast.rho, slow.rho) < 1e-10);
                CHECK(fast.postselect_prob == doctest::Approx(slow.postselect_prob).epsilon(1e-10));
                CHECK(fast.rho.labels == slow.rho.labels);

                for (SpatialMode m : {SpatialMode::k1, SpatialMode::k2}) {
                    const auto one = reduce_single_mode(s, loss, m);
                    const auto ref = brute_force_reduce(
                        s, loss, m == SpatialMode::k1 ? Conditioning::k1_only : Conditioning::k2_only);
                    CHECK(max_abs_diff(one.rho, ref.rho) < 1e-10);
                    CHECK(one.postselect_prob == doctest::Approx(ref.postselect_prob).epsilon(1e-10));
                }
                ++combos;
            }
        }
        const auto sigma = build_sigma(gp);
        for (const auto& loss : grid_losses()) {
            const auto fast = reduce_three_qubit(gp, loss);
            const auto slow = brute_force_reduce(sigma, loss);
            CHECK(max_abs_diff(fast.rho, slow.rho) < 1e-10);
            CHECK(fast.postselect_prob == doctest::Approx(slow.postselect_prob).epsilon(1e-10));
            ++combos;
        }
    }
    CHECK(combos >= 12);
}

TEST_CASE("brute force refuses large cutoffs") {
    const auto s = build_m_qubit(GainParams::make(0.5, Cutoff::of(5)), PolarizationQubit::H());
    CHECK_THROWS_AS(brute_force_reduce(s, LossSpec::make(0.5, 0.5)), RefusalError);
}

TEST_CASE("degenerate conditioning events") {
    // g = 0: nothing on k2
    const auto g0 = build_m_qubit(GainParams::make(0.0), PolarizationQubit::V());
    CHECK_THROWS_AS(reduce_two_qubit(g0, LossSpec::make(0.5, 0.5)), DegenerateEventError);
    CHECK_THROWS_AS(reduce_three_qubit(GainParams::make(0.0), LossSpec::make(1.0, 1.0)),
                    DegenerateEventError);
    // lossless: k1 always holds one photon more than k2, so one-and-one never occurs
    const auto s = build_m_qubit(GainParams::make(1e-4, Cutoff::of(3)), PolarizationQubit::plus());
    CHECK_THROWS_AS(reduce_two_qubit(s, LossSpec::make(1.0, 1.0)), DegenerateEventError);
    CHECK_THROWS_AS(brute_force_reduce(s, LossSpec::make(1.0, 1.0)), DegenerateEventError);
    CHECK_THROWS_AS(reduce_two_qubit(build_sigma(GainParams::make(0.5)), LossSpec::make(0.5, 0.5)),
                    StructuralError);
}

TEST_CASE("lossless single-mode probability is the direct one-photon weight") {
    const auto s = build_m_qubit(GainParams::make(0.3, Cutoff::of(3)), PolarizationQubit::plus());
    double direct = 0.0;
    for (const auto& t : s.ket.terms()) {
        if (t.occ[Mode::k1H] + t.occ[Mode::k1V] == 1) direct += std::norm(t.amp);
    }
    const auto r = reduce_single_mode(s, LossSpec::make(1.0, 1.0), SpatialMode::k1);
    CHECK(r.postselect_prob == doctest::Approx(direct).epsilon(1e-12));
    CHECK(brute_force_reduce(s, LossSpec::make(1.0, 1.0), Conditioning::k1_only).postselect_prob ==
          doctest::Approx(direct).epsilon(1e-12));
}

TEST_CASE("small gain: clone state is mixed by the lost photon") {
    // at g -> 0 the one-and-one events carry one pair; a second k1 photon is
    // lost and its polarization tags the branch, so the output is mixed.
    // Purity frozen from the oracle-checked reduction.
    const auto s = build_m_qubit(GainParams::make(1e-4), PolarizationQubit::plus());
    const auto r = reduce_two_qubit(s, LossSpec::make(0.5, 0.5));
    const auto ref = brute_force_reduce(build_m_qubit(GainParams::make(1e-4, Cutoff::of(3)), PolarizationQubit::plus()),
                                        LossSpec::make(0.5, 0.5));
    CHECK(std::abs(r.rho.trace() - 1.0) < 1e-10);
    CHECK((r.rho.entries - ref.rho.entries).cwiseAbs().maxCoeff() < 1e-7);
    const auto& m = r.rho.entries;
    CHECK((m * m).trace().real() == doctest::Approx(13.0 / 18.0).epsilon(1e-4));
}

TEST_CASE("weak-loss limit equals the normally ordered correlation oracle") {
    const int n = 30;
    for (double g : {0.4, 0.7}) {
        const auto gp = GainParams::make(g, Cutoff::of(n));
        const PolarizationQubit q(complex(0.6, 0.1), complex(-0.3, 0.7));
        const auto r = reduce_two_qubit(build_m_qubit(gp, q), LossSpec::make(1e-8, 1e-8));
        const Eigen::Matrix4cd ref = oracle::weak_loss_two_qubit(oracle::m_qubit(g, q.alpha(), q.beta(), n));
        CHECK((r.rho.entries - ref).cwiseAbs().maxCoeff() < 1e-6);

        const auto r3 = reduce_three_qubit(gp, LossSpec::make(1e-8, 1e-8));
        const Eigen::MatrixXcd ref3 = oracle::weak_loss_three_qubit(g, n);
        CHECK((r3.rho.entries - ref3).cwiseAbs().maxCoeff() < 1e-6);
    }
}

TEST_CASE("reduced states are physical") {
    for (double g : {0.2, 0.8, 1.19, 1.6}) {
        const auto gp = GainParams::make(g);
        for (const auto& loss : grid_losses()) {
            for (const auto& q : grid_qubits()) {
                const auto r = reduce_two_qubit(build_m_qubit(gp, q), loss);
                CHECK(r.rho.is_hermitian(1e-10));
                CHECK(std::abs(r.rho.trace() - 1.0) < 1e-10);
                CHECK(r.rho.min_eigenvalue() >= -1e-9);
                CHECK(r.postselect_prob > 0.0);
                CHECK(r.postselect_prob <= 1.0);
            }
            const auto r3 = reduce_three_qubit(gp, loss);
            CHECK(r3.rho.dim() == 8);
            CHECK(r3.rho.min_eigenvalue() >= -1e-9);
            CHECK(std::abs(r3.rho.trace() - 1.0) < 1e-10);
        }
    }
}

TEST_CASE("conditioning probability grows with transmission in the attenuated regime") {
    const auto s = build_m_qubit(GainParams::make(1.19), PolarizationQubit::minus());
    const std::vector<double> etas = {0.001, 0.005, 0.01, 0.02, 0.049, 0.08};
    for (std::size_t a = 1; a < etas.size(); ++a) {
        const double fixed = 0.042;
        CHECK(reduce_two_qubit(s, LossSpec::make(etas[a - 1], fixed)).postselect_prob <
              reduce_two_qubit(s, LossSpec::make(etas[a], fixed)).postselect_prob);
        CHECK(reduce_two_qubit(s, LossSpec::make(0.049, etas[a - 1])).postselect_prob <
              reduce_two_qubit(s, LossSpec::make(0.049, etas[a])).postselect_prob);
    }
}

TEST_CASE("reduced state depends on the transmission") {
    // halving eta does not leave rho invariant; the change is first order in eta
    const auto s = build_m_qubit(GainParams::make(0.5), PolarizationQubit::plus());
    const auto a = reduce_two_qubit(s, LossSpec::make(0.02, 0.02));
    const auto b = reduce_two_qubit(s, LossSpec::make(0.01, 0.01));
    const auto c = reduce_two_qubit(s, LossSpec::make(0.005, 0.005));
    const double dab = max_abs_diff(a.rho, b.rho);
    const double dbc = max_abs_diff(b.rho, c.rho);
    CHECK(dab > 1e-6);
    CHECK(dab / dbc == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("universality of the PPT eigenvalue across injections") {
    for (double g : {0.6, 1.19}) {
        const auto gp = GainParams::make(g);
        const auto loss = LossSpec::make(0.049, 0.042);
        const double ref = ppt_min_eigenvalue(reduce_two_qubit(build_m_qubit(gp, PolarizationQubit::H()), loss).rho, "k1");
        for (const auto& q : {PolarizationQubit::V(), PolarizationQubit::plus(), PolarizationQubit::minus(),
                              PolarizationQubit(complex(0.6, 0.1), complex(-0.3, 0.7))}) {
            const double v = ppt_min_eigenvalue(reduce_two_qubit(build_m_qubit(gp, q), loss).rho, "k1");
            CHECK(std::abs(v - ref) < 1e-6);
        }
    }
}

TEST_CASE("plus and minus injections are related by a local phase flip") {
    const auto gp = GainParams::make(0.3, Cutoff::of(3));
    const auto loss = LossSpec::make(0.4, 0.3);
    const auto p = brute_force_reduce(build_m_qubit(gp, PolarizationQubit::plus()), loss);
    const auto m = brute_force_reduce(build_m_qubit(gp, PolarizationQubit::minus()), loss);
    // V -> -V on every photon maps one injection onto the other up to the k2
    // parity (-1)^N, which cancels between terms leaving the same lost pattern
    Eigen::Matrix4cd zz = Eigen::Matrix4cd::Zero();
    zz.diagonal() << 1.0, -1.0, -1.0, 1.0;
    CHECK((zz * p.rho.entries * zz - m.rho.entries).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(p.postselect_prob == doctest::Approx(m.postselect_prob).epsilon(1e-12));
}

TEST_CASE("trigger marginal of rho prime") {
    for (double g : {0.5, 1.19}) {
        const auto gp = GainParams::make(g);
        const auto sym = reduce_three_qubit(gp, LossSpec::make(0.05, 0.05));
        CHECK(std::abs(von_neumann_entropy(partial_trace(sym.rho, {"trigger"})) - 1.0) < 1e-3);
        const auto asym = reduce_three_qubit(gp, LossSpec::make(0.049, 0.042));
        CHECK(von_neumann_entropy(partial_trace(asym.rho, {"trigger"})) <= 1.0 + 1e-12);
    }
}
