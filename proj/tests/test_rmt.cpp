#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "floqmon/rmt.hpp"
#include "oracles.hpp"

using namespace floqmon;

namespace {
double unitarity_defect(const Eigen::MatrixXcd& u) {
    return (u.adjoint() * u - Eigen::MatrixXcd::Identity(u.rows(), u.cols()))
        .cwiseAbs()
        .maxCoeff();
}
}  // namespace

TEST_CASE("sample_cue: dim=1 is a phase") {
    Rng rng(7);
    Eigen::MatrixXcd u = sample_cue(1, rng);
    CHECK(std::abs(std::abs(u(0, 0)) - 1.0) < 1e-12);
}

TEST_CASE("sample_cue: unitary to 1e-12 over 1000 seeds") {
    for (int seed = 0; seed < 1000; ++seed) {
        Rng rng(seed);
        CHECK(unitarity_defect(sample_cue(2, rng)) < 1e-12);
    }
    Rng rng(42);
    CHECK(unitarity_defect(sample_cue(5, rng)) < 1e-12);
}

TEST_CASE("sample_cue: Haar moment E|U_00|^2 = 1/2 for dim=2") {
    const int n = 100000;
    Rng rng(11);
    double sum = 0.0, sumsq = 0.0;
    for (int k = 0; k < n; ++k) {
        const double v = std::norm(sample_cue(2, rng)(0, 0));
        sum += v;
        sumsq += v * v;
    }
    const double mean = sum / n;
    const double sd = std::sqrt((sumsq / n - mean * mean) / (n - 1.0));
    CHECK(std::abs(mean - 0.5) < 3.0 * sd);
}

TEST_CASE("diagonalized_cue_gate: phases on the unit circle, sorted") {
    for (int seed = 0; seed < 100; ++seed) {
        Rng rng(seed);
        DiagonalGate g = diagonalized_cue_gate(rng);
        CHECK(std::abs(std::abs(g.phases[0]) - 1.0) < 1e-12);
        CHECK(std::abs(std::abs(g.phases[1]) - 1.0) < 1e-12);
        CHECK(std::arg(g.phases[0]) <= std::arg(g.phases[1]));
    }
}

TEST_CASE("diagonalized_cue_gate: eigenphase product equals det of the CUE sample") {
    for (int seed = 0; seed < 50; ++seed) {
        Rng r1(seed), r2(seed);
        const Complex det = sample_cue(2, r1).determinant();
        DiagonalGate g = diagonalized_cue_gate(r2);
        CHECK(std::abs(g.phases[0] * g.phases[1] - det) < 1e-10);
    }
}

TEST_CASE("diagonalized_cue_gate: eigenphase repulsion vs Poisson") {
    const int n = 100000;
    Rng rng(23);
    int small_spacing = 0;
    for (int k = 0; k < n; ++k) {
        DiagonalGate g = diagonalized_cue_gate(rng);
        double s = std::abs(std::arg(g.phases[1]) - std::arg(g.phases[0]));
        s = std::min(s, 2.0 * M_PI - s);
        if (s < 0.1) ++small_spacing;
    }
    // independent uniform phases would give P(s < 0.1) = 0.1/pi ~ 0.032;
    // the CUE joint density suppresses it to ~5e-5
    CHECK(double(small_spacing) / n < 0.1 / M_PI / 2.0);
}

TEST_CASE("sample_gue: Hermitian, zero mean, off-diagonal real variance 1/4") {
    Rng rng(3);
    double tr_sum = 0.0;
    double od_sum = 0.0, od_sumsq = 0.0;
    const int n = 10000;
    long od_count = 0;
    for (int k = 0; k < n; ++k) {
        Eigen::MatrixXcd h = sample_gue(4, rng);
        CHECK((h - h.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
        tr_sum += h.trace().real() / 4.0;
        for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j) {
                od_sum += h(i, j).real();
                od_sumsq += h(i, j).real() * h(i, j).real();
                ++od_count;
            }
    }
    // Tr(H)/dim has variance (4 * 1/2) / 16 = 1/8 per sample
    const double tr_se = std::sqrt(0.125 / n);
    CHECK(std::abs(tr_sum / n) < 3.0 * tr_se);
    const double od_mean = od_sum / od_count;
    const double od_var = od_sumsq / od_count - od_mean * od_mean;
    // variance of the sample variance of a normal: 2 sigma^4 / n
    const double var_se = std::sqrt(2.0 * 0.25 * 0.25 / od_count);
    CHECK(std::abs(od_var - 0.25) < 3.0 * var_se);
}

TEST_CASE("hermitian_exp: closed forms") {
    Eigen::MatrixXcd zero = Eigen::MatrixXcd::Zero(3, 3);
    CHECK((hermitian_exp(zero, 2.7) - Eigen::MatrixXcd::Identity(3, 3)).cwiseAbs().maxCoeff() <
          1e-14);

    Eigen::MatrixXcd pauli_z(2, 2);
    pauli_z << 1, 0, 0, -1;
    Eigen::MatrixXcd u = hermitian_exp(pauli_z, M_PI);
    CHECK((u + Eigen::MatrixXcd::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("hermitian_exp: matches the Taylor oracle on GUE input") {
    Rng rng(5);
    const double alpha = 10.0;
    for (int k = 0; k < 20; ++k) {
        Eigen::MatrixXcd h = sample_gue(4, rng);
        Eigen::MatrixXcd fast = hermitian_exp(h, 1.0 / alpha);
        Eigen::MatrixXcd slow = oracles::expm_taylor(Complex(0.0, 1.0 / alpha) * h);
        CHECK((fast - slow).cwiseAbs().maxCoeff() < 1e-9);
    }
}

TEST_CASE("hermitian_exp: inverse pairs and unitarity over 100 GUE inputs") {
    Rng rng(9);
    for (int k = 0; k < 100; ++k) {
        Eigen::MatrixXcd h = sample_gue(4, rng);
        Eigen::MatrixXcd u = hermitian_exp(h, 0.37);
        CHECK(unitarity_defect(u) < 1e-10);
        Eigen::MatrixXcd v = hermitian_exp(h, -0.37);
        CHECK((u * v - Eigen::MatrixXcd::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("hermitian_exp: pure function of its input") {
    Rng rng(1);
    Eigen::MatrixXcd h = sample_gue(4, rng);
    Eigen::MatrixXcd a = hermitian_exp(h, 0.2);
    Eigen::MatrixXcd b = hermitian_exp(h, 0.2);
    CHECK((a - b).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("hermitian_exp: rejects non-Hermitian input") {
    Eigen::MatrixXcd m(2, 2);
    m << 0, 1, 0, 0;
    CHECK_THROWS_AS(hermitian_exp(m, 1.0), std::invalid_argument);
}
