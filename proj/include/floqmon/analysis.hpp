#ifndef FLOQMON_ANALYSIS_HPP
#define FLOQMON_ANALYSIS_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "floqmon/dataset.hpp"
#include "floqmon/util.hpp"

namespace floqmon {

struct PcaSpectrum {
    std::vector<double> eigenvalues;  // descending
    double gap = 0.0;                 // lambda_1 - lambda_2
};

// Eigenvalues of the M x M covariance Sigma = D^T D / (N_r - 1) over the
// measurement-index dimension. Uncentered by default; the centered
// variant subtracts column means first.
inline PcaSpectrum pca_spectrum(const Dataset& d, bool centered = false) {
    if (d.n_realizations < 2) throw std::invalid_argument("pca_spectrum: need N_r >= 2");
    const Eigen::Index nr = static_cast<Eigen::Index>(d.n_realizations);
    const Eigen::Index m = static_cast<Eigen::Index>(d.n_measurements);
    Eigen::MatrixXd x(nr, m);
    for (Eigen::Index r = 0; r < nr; ++r)
        for (Eigen::Index c = 0; c < m; ++c) x(r, c) = d.at(r, c);
    if (centered) x.rowwise() -= x.colwise().mean();
    Eigen::MatrixXd sigma = (x.transpose() * x) / double(nr - 1);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sigma, Eigen::EigenvaluesOnly);
    PcaSpectrum spec;
    spec.eigenvalues.assign(es.eigenvalues().data(), es.eigenvalues().data() + m);
    std::sort(spec.eigenvalues.begin(), spec.eigenvalues.end(), std::greater<double>());
    spec.gap = (m >= 2) ? spec.eigenvalues[0] - spec.eigenvalues[1] : 0.0;
    return spec;
}

namespace detail {
// KL divergence between the empirical 2x2 joint and the product of
// marginals; counts given as n[a][b] for outcomes (a, b).
inline double mi_from_counts(const double n[2][2], double total) {
    const double pa[2] = {(n[0][0] + n[0][1]) / total, (n[1][0] + n[1][1]) / total};
    const double pb[2] = {(n[0][0] + n[1][0]) / total, (n[0][1] + n[1][1]) / total};
    double mi = 0.0;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
            const double pab = n[a][b] / total;
            if (pab > 0.0) mi += pab * std::log(pab / (pa[a] * pb[b]));
        }
    return std::max(mi, 0.0);
}
}  // namespace detail

// Empirical mutual information (nats) between measurement columns i and j,
// by counting and normalizing; zero joint cells contribute 0.
inline double mutual_information(const Dataset& d, std::size_t i, std::size_t j) {
    if (i >= d.n_measurements || j >= d.n_measurements || i == j)
        throw std::out_of_range("mutual_information: bad column pair");
    if (d.n_realizations < 1) throw std::invalid_argument("mutual_information: empty dataset");
    double counts[2][2] = {{0, 0}, {0, 0}};
    for (std::size_t r = 0; r < d.n_realizations; ++r)
        counts[d.at(r, i)][d.at(r, j)] += 1.0;
    return detail::mi_from_counts(counts, double(d.n_realizations));
}

// Symmetric M x M matrix of pairwise MI. The diagonal holds the marginal
// entropy H(p_i) for display; it is never used in xi_m.
struct MIMatrix {
    std::size_t m = 0;
    std::vector<double> values;
    double at(std::size_t i, std::size_t j) const { return values[i * m + j]; }
    double& at(std::size_t i, std::size_t j) { return values[i * m + j]; }
};

inline MIMatrix mi_matrix(const Dataset& d) {
    if (d.n_measurements < 2) throw std::invalid_argument("mi_matrix: need M >= 2");
    MIMatrix mi;
    mi.m = d.n_measurements;
    mi.values.assign(mi.m * mi.m, 0.0);
    for (std::size_t i = 0; i < mi.m; ++i) {
        double up = 0.0;
        for (std::size_t r = 0; r < d.n_realizations; ++r) up += d.at(r, i);
        const double p = up / double(d.n_realizations);
        double h = 0.0;
        if (p > 0.0) h -= p * std::log(p);
        if (p < 1.0) h -= (1.0 - p) * std::log(1.0 - p);
        mi.at(i, i) = h;
    }
    for (std::size_t i = 0; i < mi.m; ++i)
        for (std::size_t j = i + 1; j < mi.m; ++j) {
            const double v = mutual_information(d, i, j);
            mi.at(i, j) = v;
            mi.at(j, i) = v;
        }
    return mi;
}

// xi_m: off-diagonal sum of the leading m x m principal submatrix, over m.
inline double correlation_length(const MIMatrix& mi, std::size_t m) {
    if (m < 2 || m > mi.m) throw std::out_of_range("correlation_length: m out of range");
    double sum = 0.0;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
            if (i != j) sum += mi.at(i, j);
    return sum / double(m);
}

// xi_m for every m = 2..M, indexed m-2.
inline std::vector<double> correlation_curve(const MIMatrix& mi) {
    std::vector<double> xi;
    xi.reserve(mi.m - 1);
    double running = 0.0;  // off-diagonal sum of the leading m x m block
    for (std::size_t m = 2; m <= mi.m; ++m) {
        const std::size_t k = m - 1;
        for (std::size_t i = 0; i < k; ++i) running += mi.at(i, k) + mi.at(k, i);
        xi.push_back(running / double(m));
    }
    return xi;
}

struct BaselineCurve {
    std::vector<double> xi_mean;  // indexed m-2, m = 2..M
    std::vector<double> xi_se;    // standard error over repeats
};

// xi^Rand_m averaged over independent uniform-random datasets of the same
// shape; isolates the finite-sample MI bias (~ 1/N_r).
inline BaselineCurve random_baseline(std::size_t m, std::size_t n_r, Rng& rng,
                                     int n_repeats = 16) {
    if (m < 2 || n_r < 1 || n_repeats < 1)
        throw std::invalid_argument("random_baseline: invalid arguments");
    std::vector<std::vector<double>> curves;
    curves.reserve(n_repeats);
    std::uniform_int_distribution<int> bit(0, 1);
    for (int rep = 0; rep < n_repeats; ++rep) {
        Dataset d(n_r, m);
        for (std::uint8_t& e : d.entries) e = static_cast<std::uint8_t>(bit(rng));
        curves.push_back(correlation_curve(mi_matrix(d)));
    }
    BaselineCurve base;
    base.xi_mean.assign(m - 1, 0.0);
    base.xi_se.assign(m - 1, 0.0);
    for (std::size_t k = 0; k < m - 1; ++k) {
        double mean = 0.0;
        for (const auto& c : curves) mean += c[k];
        mean /= n_repeats;
        double var = 0.0;
        for (const auto& c : curves) var += (c[k] - mean) * (c[k] - mean);
        base.xi_mean[k] = mean;
        base.xi_se[k] = (n_repeats > 1)
                            ? std::sqrt(var / (n_repeats - 1.0) / n_repeats)
                            : 0.0;
    }
    return base;
}

struct SlopeFit {
    double k = 0.0;
    double intercept = 0.0;
    double rmse = 0.0;
};

// Least-squares line through (m, y_m) for m in [m_lo, m_hi]; y indexed m-2.
inline SlopeFit fit_slope(const std::vector<double>& y_by_m, std::size_t m_lo, std::size_t m_hi) {
    if (m_lo < 2 || m_hi < m_lo || m_hi - 2 >= y_by_m.size() || m_hi - m_lo + 1 < 3)
        throw std::invalid_argument("fit_slope: bad window");
    const std::size_t n = m_hi - m_lo + 1;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t m = m_lo; m <= m_hi; ++m) {
        const double x = double(m), v = y_by_m[m - 2];
        sx += x;
        sy += v;
        sxx += x * x;
        sxy += x * v;
    }
    SlopeFit fit;
    const double denom = n * sxx - sx * sx;
    fit.k = (n * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.k * sx) / n;
    double sse = 0.0;
    for (std::size_t m = m_lo; m <= m_hi; ++m) {
        const double r = y_by_m[m - 2] - (fit.intercept + fit.k * m);
        sse += r * r;
    }
    fit.rmse = std::sqrt(sse / n);
    return fit;
}

// Fit windows used in the reference analysis: [30,60], [35,70], [40,80]
// for M = 60, 70, 80; otherwise the upper half.
inline std::pair<std::size_t, std::size_t> default_fit_window(std::size_t m) {
    if (m == 60) return {30, 60};
    if (m == 70) return {35, 70};
    if (m == 80) return {40, 80};
    return {std::max<std::size_t>(2, m / 2), m};
}

}  // namespace floqmon

#endif
