#ifndef FLOQMON_ENTANGLEMENT_HPP
#define FLOQMON_ENTANGLEMENT_HPP

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "floqmon/statevector.hpp"

namespace floqmon {

inline constexpr double kEpsEntropy = 1e-14;

// Eigenvalues of the reduced density matrix of subsystem A.
struct SchmidtSpectrum {
    std::vector<double> probabilities;
};

// Schmidt spectrum across the cut A = sites [0, cut). Computed as the
// squared singular values of the 2^cut x 2^(L-cut) amplitude reshape;
// cheaper and better conditioned than forming rho_A.
inline SchmidtSpectrum schmidt_spectrum(const StateVector& psi, int cut) {
    const int L = psi.n_qubits();
    if (cut < 1 || cut > L - 1) throw std::invalid_argument("schmidt_spectrum: invalid cut");
    const std::size_t da = std::size_t{1} << cut;
    const std::size_t db = std::size_t{1} << (L - cut);
    Eigen::MatrixXcd m(da, db);
    auto amps = psi.amplitudes();
    for (std::size_t b = 0; b < db; ++b)
        for (std::size_t a = 0; a < da; ++a) m(a, b) = amps[a | (b << cut)];
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
    const Eigen::VectorXd& sv = svd.singularValues();
    SchmidtSpectrum spec;
    spec.probabilities.reserve(sv.size());
    for (Eigen::Index k = 0; k < sv.size(); ++k)
        spec.probabilities.push_back(sv(k) * sv(k));
    return spec;
}

// Von Neumann entropy in nats; eigenvalues below kEpsEntropy contribute 0.
inline double entropy(const SchmidtSpectrum& spec) {
    double s = 0.0;
    for (double lam : spec.probabilities)
        if (lam > kEpsEntropy) s -= lam * std::log(lam);
    return s;
}

inline double half_chain_entropy(const StateVector& psi) {
    return entropy(schmidt_spectrum(psi, psi.n_qubits() / 2));
}

// Page value of the half-chain entropy: 0.5 * (L log 2 - 1).
inline double page_value(int L) {
    if (L < 2 || L % 2 != 0) throw std::invalid_argument("page_value: L must be even and >= 2");
    return 0.5 * (L * std::log(2.0) - 1.0);
}

}  // namespace floqmon

#endif
