#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "floqmon/rmt.hpp"
#include "floqmon/statevector.hpp"
#include "oracles.hpp"

using namespace floqmon;

namespace {

StateVector random_state(int L, Rng& rng) {
    StateVector psi(L);
    std::normal_distribution<double> n(0.0, 1.0);
    for (Complex& a : psi.amplitudes()) a = Complex(n(rng), n(rng));
    psi.renormalize();
    return psi;
}

Eigen::VectorXcd to_vector(const StateVector& psi) {
    Eigen::VectorXcd v(psi.dim());
    for (std::size_t i = 0; i < psi.dim(); ++i) v(i) = psi.amplitudes()[i];
    return v;
}

}  // namespace

TEST_CASE("neel_state: basics") {
    StateVector psi = StateVector::neel(2);
    // |up down> = site 0 up (bit 0 set) only
    CHECK(std::abs(psi.amplitudes()[1] - Complex(1.0, 0.0)) == 0.0);

    StateVector psi4 = StateVector::neel(4);
    int nonzero = 0;
    for (const Complex& a : psi4.amplitudes())
        if (std::abs(a) > 0) ++nonzero;
    CHECK(nonzero == 1);
    CHECK(std::abs(psi4.squared_norm() - 1.0) < 1e-14);

    CHECK_THROWS_AS(StateVector::neel(3), std::invalid_argument);
    CHECK_THROWS_AS(StateVector::neel(0), std::invalid_argument);
}

TEST_CASE("apply_1q: identity and Pauli-X") {
    StateVector psi = StateVector::neel(2);
    StateVector copy = psi;
    psi.apply_1q(Eigen::Matrix2cd::Identity(), 0);
    for (std::size_t i = 0; i < psi.dim(); ++i)
        CHECK(psi.amplitudes()[i] == copy.amplitudes()[i]);

    Eigen::Matrix2cd x;
    x << 0, 1, 1, 0;
    psi.apply_1q(x, 0);  // |up down> -> |down down>
    CHECK(std::abs(psi.amplitudes()[0] - Complex(1.0, 0.0)) < 1e-15);

    CHECK_THROWS_AS(psi.apply_1q(x, 2), std::out_of_range);
}

TEST_CASE("apply_1q: random CUE gate preserves the norm") {
    Rng rng(17);
    StateVector psi = random_state(6, rng);
    for (int k = 0; k < 20; ++k) {
        Eigen::Matrix2cd g = sample_cue(2, rng);
        psi.apply_1q(g, k % 6);
    }
    CHECK(std::abs(psi.squared_norm() - 1.0) < 1e-12);
}

TEST_CASE("apply_2q: identity, SWAP, collision") {
    StateVector psi = StateVector::neel(2);
    psi.apply_2q(Eigen::Matrix4cd::Identity(), 0, 1);
    CHECK(std::abs(psi.amplitudes()[1] - Complex(1.0, 0.0)) < 1e-15);

    Eigen::Matrix4cd swap = Eigen::Matrix4cd::Zero();
    swap(0, 0) = swap(3, 3) = 1;
    swap(1, 2) = swap(2, 1) = 1;
    psi.apply_2q(swap, 0, 1);  // |up down> -> |down up>
    CHECK(std::abs(psi.amplitudes()[2] - Complex(1.0, 0.0)) < 1e-15);

    CHECK_THROWS_AS(psi.apply_2q(swap, 1, 1), std::invalid_argument);
    CHECK_THROWS_AS(psi.apply_2q(swap, 0, 5), std::out_of_range);
}

TEST_CASE("apply_2q: exp(iM/alpha) matches the dense Kronecker oracle at L=4") {
    Rng rng(31);
    Eigen::Matrix4cd gate = hermitian_exp(sample_gue(4, rng), 1.0 / 10.0);
    StateVector psi = random_state(4, rng);
    Eigen::VectorXcd dense = oracles::kron_2q(gate, 1, 2, 4) * to_vector(psi);
    psi.apply_2q(gate, 1, 2);
    CHECK((to_vector(psi) - dense).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("gate application agrees with Kronecker oracles, L <= 5, 100 gates") {
    Rng rng(13);
    for (int trial = 0; trial < 100; ++trial) {
        const int L = 2 + int(rng() % 4);
        StateVector psi = random_state(L, rng);
        Eigen::VectorXcd v = to_vector(psi);
        if (rng() % 2 == 0) {
            const int site = int(rng() % L);
            Eigen::Matrix2cd g = sample_cue(2, rng);
            psi.apply_1q(g, site);
            v = oracles::kron_1q(g, site, L) * v;
        } else {
            int a = int(rng() % L), b = int(rng() % L);
            if (a == b) b = (b + 1) % L;
            Eigen::Matrix4cd g = sample_cue(4, rng);
            psi.apply_2q(g, a, b);
            v = oracles::kron_2q(g, a, b, L) * v;
        }
        CHECK((to_vector(psi) - v).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("norm preservation over depth-100 random circuits") {
    Rng rng(19);
    for (int L : {4, 8, 10}) {
        StateVector psi = StateVector::neel(L);
        for (int d = 0; d < 100; ++d) {
            const int a = int(rng() % L);
            const int b = (a + 1) % L;
            psi.apply_1q(sample_cue(2, rng), a);
            psi.apply_2q(sample_cue(4, rng), a, b);
        }
        CHECK(std::abs(std::sqrt(psi.squared_norm()) - 1.0) < 1e-10);
    }
}

TEST_CASE("born_probability: closed forms and brute-force enumeration") {
    StateVector neel = StateVector::neel(4);
    CHECK(neel.born_probability(0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(neel.born_probability(1) == doctest::Approx(0.0).epsilon(1e-12));

    StateVector plus(1);
    plus.amplitudes()[0] = Complex(1.0 / std::sqrt(2.0), 0.0);
    plus.amplitudes()[1] = Complex(1.0 / std::sqrt(2.0), 0.0);
    CHECK(plus.born_probability(0) == doctest::Approx(0.5).epsilon(1e-12));

    Rng rng(47);
    StateVector psi = random_state(5, rng);
    for (int site = 0; site < 5; ++site) {
        double direct = 0.0;
        for (std::size_t i = 0; i < psi.dim(); ++i)
            if ((i >> site) & 1) direct += std::norm(psi.amplitudes()[i]);
        const double p = psi.born_probability(site);
        CHECK(p >= 0.0);
        CHECK(p <= 1.0);
        CHECK(p == doctest::Approx(direct).epsilon(1e-12));
        CHECK(p + (1.0 - p) == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("project: closed forms and impossible outcomes") {
    StateVector neel = StateVector::neel(2);
    StateVector copy = neel;
    neel.project(0, Outcome::up);
    for (std::size_t i = 0; i < neel.dim(); ++i)
        CHECK(std::abs(neel.amplitudes()[i] - copy.amplitudes()[i]) < 1e-15);

    CHECK_THROWS_AS(copy.project(0, Outcome::down), ImpossibleOutcome);

    // (|up down> + |down up>)/sqrt(2), project site 0 up -> |up down>
    StateVector bell(2);
    bell.amplitudes()[0] = Complex(0.0, 0.0);
    bell.amplitudes()[1] = Complex(1.0 / std::sqrt(2.0), 0.0);
    bell.amplitudes()[2] = Complex(1.0 / std::sqrt(2.0), 0.0);
    bell.project(0, Outcome::up);
    CHECK(std::abs(bell.amplitudes()[1] - Complex(1.0, 0.0)) < 1e-12);
    CHECK(bell.born_probability(0) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("measure: deterministic on eigenstates, Bernoulli on superpositions") {
    Rng rng(3);
    for (int k = 0; k < 10; ++k) {
        StateVector neel = StateVector::neel(4);
        CHECK(neel.measure(0, rng) == Outcome::up);
    }

    int ups = 0;
    const int n = 100000;
    for (int k = 0; k < n; ++k) {
        StateVector plus(1);
        plus.amplitudes()[0] = Complex(1.0 / std::sqrt(2.0), 0.0);
        plus.amplitudes()[1] = Complex(1.0 / std::sqrt(2.0), 0.0);
        if (plus.measure(0, rng) == Outcome::up) ++ups;
        CHECK(std::abs(plus.squared_norm() - 1.0) < 1e-10);
    }
    const double se = std::sqrt(0.25 / n);
    CHECK(std::abs(double(ups) / n - 0.5) < 3.0 * se);
}

TEST_CASE("measure: reproducible for identical state and seed") {
    Rng rng_a(99), rng_b(99);
    StateVector a = random_state(6, rng_a);
    Rng r1(5), r2(5);
    StateVector b = a;
    CHECK(a.measure(2, r1) == b.measure(2, r2));
    for (std::size_t i = 0; i < a.dim(); ++i)
        CHECK(a.amplitudes()[i] == b.amplitudes()[i]);
}
