#ifndef FLOQMON_RMT_HPP
#define FLOQMON_RMT_HPP

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <stdexcept>

#include "floqmon/util.hpp"

namespace floqmon {

// Eigenphases of a diagonalized 2x2 CUE matrix, sorted by principal
// argument ascending so rebuilds from the same seed are bit-identical.
struct DiagonalGate {
    std::array<Complex, 2> phases;
};

// dim x dim matrix with i.i.d. standard complex normal entries
// (real and imaginary parts each N(0, 1/2)).
inline Eigen::MatrixXcd sample_ginibre(int dim, Rng& rng) {
    if (dim < 1) throw std::invalid_argument("sample_ginibre: dim must be >= 1");
    std::normal_distribution<double> n(0.0, 1.0 / std::sqrt(2.0));
    Eigen::MatrixXcd a(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) {
            double re = n(rng);
            double im = n(rng);
            a(i, j) = Complex(re, im);
        }
    return a;
}

// Haar-distributed unitary via the Mezzadri construction: QR of a Ginibre
// matrix with the R diagonal's phases absorbed into Q.
inline Eigen::MatrixXcd sample_cue(int dim, Rng& rng) {
    Eigen::MatrixXcd a = sample_ginibre(dim, rng);
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(a);
    Eigen::MatrixXcd q = qr.householderQ();
    Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < dim; ++j) {
        Complex d = r(j, j);
        double m = std::abs(d);
        q.col(j) *= (m > 0.0) ? d / m : Complex(1.0, 0.0);
    }
    return q;
}

inline DiagonalGate diagonalized_cue_gate(Rng& rng) {
    Eigen::Matrix2cd u = sample_cue(2, rng);
    Eigen::ComplexEigenSolver<Eigen::Matrix2cd> es(u, /*computeEigenvectors=*/false);
    Complex e0 = es.eigenvalues()(0);
    Complex e1 = es.eigenvalues()(1);
    // renormalize onto the unit circle (roundoff only)
    e0 /= std::abs(e0);
    e1 /= std::abs(e1);
    if (std::arg(e0) > std::arg(e1)) std::swap(e0, e1);
    return DiagonalGate{{e0, e1}};
}

// GUE sample H = (A + A^dag)/2 with A a Ginibre matrix. Off-diagonal
// complex variance 1/2 (real part 1/4), diagonal real variance 1/2.
inline Eigen::MatrixXcd sample_gue(int dim, Rng& rng) {
    Eigen::MatrixXcd a = sample_ginibre(dim, rng);
    return 0.5 * (a + a.adjoint());
}

// exp(i * scale * H) for Hermitian H, via eigendecomposition. The eigen
// route keeps the result unitary to roundoff.
inline Eigen::MatrixXcd hermitian_exp(const Eigen::MatrixXcd& h, double scale) {
    const double herm_tol = 1e-10;
    if ((h - h.adjoint()).cwiseAbs().maxCoeff() > herm_tol)
        throw std::invalid_argument("hermitian_exp: input is not Hermitian");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
    const Eigen::VectorXd& lam = es.eigenvalues();
    Eigen::VectorXcd phase(lam.size());
    for (Eigen::Index k = 0; k < lam.size(); ++k)
        phase(k) = std::polar(1.0, scale * lam(k));
    return es.eigenvectors() * phase.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace floqmon

#endif
