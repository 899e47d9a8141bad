#include "oracle.hpp"
#include "qiopa/amplifier.hpp"
#include "qiopa/analysis.hpp"
#include "qiopa/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace qiopa;

namespace {

DensityMatrix bell_phi_minus() {
    // (|HH> - |VV>)/sqrt2
    Eigen::Vector4cd v(1.0, 0.0, 0.0, -1.0);
    v /= std::sqrt(2.0);
    return DensityMatrix::qubits({"a", "b"}, v * v.adjoint());
}

DensityMatrix random_qubit_state(std::mt19937_64& rng, const std::string& label) {
    return DensityMatrix::qubits({label}, oracle::random_state(2, rng));
}

}  // namespace

TEST_CASE("partial transpose on known states") {
    const auto hv = tensor(ket_to_density(PolarizationQubit::H(), "a"), ket_to_density(PolarizationQubit::V(), "b"));
    CHECK(ppt_min_eigenvalue(hv, "a") == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
    CHECK(ppt_min_eigenvalue(bell_phi_minus(), "a") == doctest::Approx(-0.5));
    CHECK(ppt_min_eigenvalue(bell_phi_minus(), "b") == doctest::Approx(-0.5));
    CHECK_THROWS_AS(ppt_min_eigenvalue(bell_phi_minus(), "c"), InvalidArgument);

    std::mt19937_64 rng(11);
    for (int k = 0; k < 20; ++k) {
        const Eigen::MatrixXcd m = oracle::random_state(8, rng);
        const auto rho = DensityMatrix::qubits({"t", "x", "y"}, m);
        for (int q = 0; q < 3; ++q) {
            const Eigen::MatrixXcd ref = oracle::partial_transpose(m, 3, q);
            CHECK((partial_transpose(rho, rho.labels[q]).entries - ref).cwiseAbs().maxCoeff() < 1e-15);
        }
    }
}

TEST_CASE("separable states pass the PPT test") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u01;
    for (int k = 0; k < 100; ++k) {
        const auto prod = tensor(random_qubit_state(rng, "a"), random_qubit_state(rng, "b"));
        CHECK(ppt_min_eigenvalue(prod, "a") >= -1e-10);

        Eigen::MatrixXcd mix = Eigen::MatrixXcd::Zero(4, 4);
        double total = 0.0;
        for (int c = 0; c < 4; ++c) {
            const double w = u01(rng);
            total += w;
            mix += w * tensor(random_qubit_state(rng, "a"), random_qubit_state(rng, "b")).entries;
        }
        const auto sep = DensityMatrix::qubits({"a", "b"}, mix / total);
        CHECK(ppt_min_eigenvalue(sep, "b") >= -1e-10);
    }
}

TEST_CASE("von Neumann entropy") {
    CHECK(von_neumann_entropy(ket_to_density(PolarizationQubit::plus())) == doctest::Approx(0.0).scale(1.0));
    CHECK(von_neumann_entropy(DensityMatrix::maximally_mixed({"q"})) == doctest::Approx(1.0));
    CHECK(von_neumann_entropy(DensityMatrix::maximally_mixed({"a", "b", "c"})) == doctest::Approx(3.0));

    Eigen::Matrix2cd bad;
    bad << 1.1, 0.0, 0.0, -0.1;
    CHECK_THROWS_AS(von_neumann_entropy(DensityMatrix::qubits({"q"}, bad)), NonPhysicalError);

    std::mt19937_64 rng(5);
    for (int k = 0; k < 50; ++k) {
        const auto a = random_qubit_state(rng, "a");
        const auto b = DensityMatrix::qubits({"b", "c"}, oracle::random_state(4, rng));
        CHECK(std::abs(von_neumann_entropy(tensor(a, b)) - von_neumann_entropy(a) - von_neumann_entropy(b)) < 1e-8);
    }
}

TEST_CASE("entanglement entropy of the trigger-entangled state") {
    for (int k = 0; k <= 8; ++k) {
        const double g = 0.25 * k;
        CHECK(std::abs(entanglement_entropy_sigma(GainParams::make(g)) - 1.0) < 1e-9);
    }
    // at g = 0 the seed pair is a Bell state; its trigger marginal is maximally mixed
    const auto bell = bell_phi_minus();
    CHECK(von_neumann_entropy(partial_trace(bell, {"a"})) == doctest::Approx(1.0));
}

TEST_CASE("Uhlmann fidelity") {
    const auto h = ket_to_density(PolarizationQubit::H());
    const auto v = ket_to_density(PolarizationQubit::V());
    const auto mixed = DensityMatrix::maximally_mixed({"q"});
    CHECK(uhlmann_fidelity(h, h) == doctest::Approx(1.0));
    CHECK(uhlmann_fidelity(h, v) == doctest::Approx(0.0).scale(1.0));
    CHECK(uhlmann_fidelity(h, mixed) == doctest::Approx(0.5));
    CHECK(uhlmann_fidelity(mixed, h) == doctest::Approx(0.5));

    std::mt19937_64 rng(9);
    std::normal_distribution<double> n01;
    for (int k = 0; k < 50; ++k) {
        const PolarizationQubit a(complex(n01(rng), n01(rng)), complex(n01(rng), n01(rng)));
        const PolarizationQubit b(complex(n01(rng), n01(rng)), complex(n01(rng), n01(rng)));
        CHECK(std::abs(uhlmann_fidelity(ket_to_density(a), ket_to_density(b)) - overlap_probability(a, b)) < 1e-9);

        const auto x = DensityMatrix::qubits({"a", "b"}, oracle::random_state(4, rng));
        const auto y = DensityMatrix::qubits({"a", "b"}, oracle::random_state(4, rng));
        const double f = uhlmann_fidelity(x, y);
        CHECK(f >= 0.0);
        CHECK(f <= 1.0);
        CHECK(f == doctest::Approx(uhlmann_fidelity(y, x)).epsilon(1e-8));
        CHECK(std::abs(uhlmann_fidelity(x, x) - 1.0) < 1e-9);
        CHECK(hs_distance(x, x) < 1e-9);
        if (hs_distance(x, y) > 1e-6) CHECK(f < 1.0 - 1e-9);
    }
    CHECK_THROWS_AS(uhlmann_fidelity(h, DensityMatrix::maximally_mixed({"a", "b"})), StructuralError);
}

TEST_CASE("Hilbert-Schmidt distance") {
    const auto h = ket_to_density(PolarizationQubit::H());
    const auto v = ket_to_density(PolarizationQubit::V());
    CHECK(hs_distance(h, h) == 0.0);
    CHECK(hs_distance(h, v) == doctest::Approx(2.0));
    CHECK(hs_distance(h, DensityMatrix::maximally_mixed({"q"})) == doctest::Approx(0.5));
    for (double g : {0.0, 0.5, 1.19, 2.0}) {
        const auto gp = GainParams::make(g);
        CHECK(std::abs(hs_distance(build_psi_h(gp).ket, build_psi_v(gp).ket) - 2.0) < 1e-9);
    }
    // the dense path on a truncated pair agrees with the ket shortcut
    const auto gp = GainParams::make(0.6, Cutoff::of(4));
    const auto a = build_psi_h(gp).ket;
    const auto b = build_psi_v(gp).ket;
    const auto basis = joint_support(a, b);
    const double dense = hs_distance(ket_to_density(a, basis), ket_to_density(b, basis));
    CHECK(dense == doctest::Approx(hs_distance(a, b)).epsilon(1e-12));
}

TEST_CASE("psd square root") {
    std::mt19937_64 rng(2);
    const Eigen::MatrixXcd m = oracle::random_state(4, rng);
    const Eigen::MatrixXcd s = psd_sqrt(m);
    CHECK((s * s - m).cwiseAbs().maxCoeff() < 1e-12);
}
