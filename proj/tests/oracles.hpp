// Test-only oracles, independent of the library's fast paths: dense
// Kronecker embeddings, explicit partial traces, a Taylor-series matrix
// exponential, and exhaustive-count statistics.

#ifndef FLOQMON_TESTS_ORACLES_HPP
#define FLOQMON_TESTS_ORACLES_HPP

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "floqmon/analysis.hpp"
#include "floqmon/dataset.hpp"

namespace oracles {

using Complex = std::complex<double>;

// Dense 2^L x 2^L embedding of a single-qubit gate on `site`, following
// the library's bit convention (site i = bit i, gate indexed by bit value).
inline Eigen::MatrixXcd kron_1q(const Eigen::Matrix2cd& g, int site, int L) {
    const std::size_t dim = std::size_t{1} << L;
    const std::size_t mask = std::size_t{1} << site;
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(dim, dim);
    for (std::size_t c = 0; c < dim; ++c) {
        const int in_bit = (c & mask) ? 1 : 0;
        for (int out_bit = 0; out_bit < 2; ++out_bit) {
            const std::size_t r = (c & ~mask) | (out_bit ? mask : 0);
            u(r, c) = g(out_bit, in_bit);
        }
    }
    return u;
}

// Two-qubit embedding; the 4x4 gate index is bit(site_a) + 2*bit(site_b).
inline Eigen::MatrixXcd kron_2q(const Eigen::Matrix4cd& g, int site_a, int site_b, int L) {
    const std::size_t dim = std::size_t{1} << L;
    const std::size_t ma = std::size_t{1} << site_a;
    const std::size_t mb = std::size_t{1} << site_b;
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(dim, dim);
    for (std::size_t c = 0; c < dim; ++c) {
        const int in_idx = ((c & ma) ? 1 : 0) + 2 * ((c & mb) ? 1 : 0);
        for (int out_idx = 0; out_idx < 4; ++out_idx) {
            const std::size_t r =
                (c & ~(ma | mb)) | ((out_idx & 1) ? ma : 0) | ((out_idx & 2) ? mb : 0);
            u(r, c) = g(out_idx, in_idx);
        }
    }
    return u;
}

// Reduced density matrix of the low `cut` sites by explicit partial trace.
inline Eigen::MatrixXcd partial_trace_rho_a(const std::vector<Complex>& amps, int L, int cut) {
    const std::size_t da = std::size_t{1} << cut;
    const std::size_t db = std::size_t{1} << (L - cut);
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(da, da);
    for (std::size_t a = 0; a < da; ++a)
        for (std::size_t ap = 0; ap < da; ++ap)
            for (std::size_t b = 0; b < db; ++b)
                rho(a, ap) += amps[a | (b << cut)] * std::conj(amps[ap | (b << cut)]);
    return rho;
}

// exp(M) by scaling-and-squaring with a machine-precision Taylor series.
inline Eigen::MatrixXcd expm_taylor(const Eigen::MatrixXcd& m) {
    int squarings = 0;
    double norm = m.cwiseAbs().sum();
    Eigen::MatrixXcd scaled = m;
    while (norm > 0.5) {
        scaled *= 0.5;
        norm *= 0.5;
        ++squarings;
    }
    const Eigen::MatrixXcd eye = Eigen::MatrixXcd::Identity(m.rows(), m.cols());
    Eigen::MatrixXcd result = eye;
    Eigen::MatrixXcd term = eye;
    for (int k = 1; k < 60; ++k) {
        term = term * scaled / double(k);
        result += term;
        if (term.cwiseAbs().maxCoeff() < 1e-18) break;
    }
    for (int s = 0; s < squarings; ++s) result = result * result;
    return result;
}

// MI by integer counting over all rows, written out cell by cell.
inline double exhaustive_mi(const floqmon::Dataset& d, std::size_t i, std::size_t j) {
    long n11 = 0, n10 = 0, n01 = 0, n00 = 0;
    for (std::size_t r = 0; r < d.n_realizations; ++r) {
        const int a = d.at(r, i), b = d.at(r, j);
        if (a == 1 && b == 1) ++n11;
        if (a == 1 && b == 0) ++n10;
        if (a == 0 && b == 1) ++n01;
        if (a == 0 && b == 0) ++n00;
    }
    const double n = double(d.n_realizations);
    const double pi1 = (n11 + n10) / n, pi0 = (n01 + n00) / n;
    const double pj1 = (n11 + n01) / n, pj0 = (n10 + n00) / n;
    double mi = 0.0;
    if (n11 > 0) mi += (n11 / n) * std::log((n11 / n) / (pi1 * pj1));
    if (n10 > 0) mi += (n10 / n) * std::log((n10 / n) / (pi1 * pj0));
    if (n01 > 0) mi += (n01 / n) * std::log((n01 / n) / (pi0 * pj1));
    if (n00 > 0) mi += (n00 / n) * std::log((n00 / n) / (pi0 * pj0));
    return mi;
}

// xi_m by the literal double loop over the leading m x m block.
inline double brute_force_xi(const floqmon::MIMatrix& mi, std::size_t m) {
    double sum = 0.0;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
            if (i != j) sum += mi.at(i, j);
    return sum / double(m);
}

}  // namespace oracles

#endif
