#ifndef FLOQMON_HEISENBERG_HPP
#define FLOQMON_HEISENBERG_HPP

#include <Eigen/Dense>
#include <bit>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "floqmon/statevector.hpp"
#include "floqmon/util.hpp"

namespace floqmon {

struct HeisenbergParams {
    int L = 14;
    double W = 3.0;              // disorder strength
    std::vector<double> fields;  // h_i, uniform on [-W, W]
};

inline HeisenbergParams sample_heisenberg_params(int L, double W, Rng& rng) {
    if (L < 2 || L % 2 != 0 || W < 0.0)
        throw std::invalid_argument("sample_heisenberg_params: invalid params");
    HeisenbergParams p{L, W, {}};
    std::uniform_real_distribution<double> u(-W, W);
    p.fields.reserve(L);
    for (int i = 0; i < L; ++i) p.fields.push_back(W > 0.0 ? u(rng) : 0.0);
    return p;
}

// Basis states with n_up bits set, ascending.
inline std::vector<std::uint32_t> sz_sector_basis(int L, int n_up) {
    std::vector<std::uint32_t> basis;
    for (std::uint32_t s = 0; s < (std::uint32_t{1} << L); ++s)
        if (std::popcount(s) == n_up) basis.push_back(s);
    return basis;
}

// Nearest-neighbor Heisenberg chain with Z fields, restricted to one
// total-S^z sector. Real symmetric in the computational basis.
inline Eigen::MatrixXd heisenberg_sector_hamiltonian(const HeisenbergParams& p,
                                                     const std::vector<std::uint32_t>& basis) {
    const int L = p.L;
    if (static_cast<int>(p.fields.size()) != L)
        throw std::invalid_argument("heisenberg_sector_hamiltonian: fields size mismatch");
    std::vector<std::int32_t> pos(std::size_t{1} << L, -1);
    for (std::size_t k = 0; k < basis.size(); ++k) pos[basis[k]] = static_cast<std::int32_t>(k);

    const std::size_t d = basis.size();
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(d, d);
    for (std::size_t k = 0; k < d; ++k) {
        const std::uint32_t s = basis[k];
        double diag = 0.0;
        for (int i = 0; i < L; ++i)
            diag += p.fields[i] * (((s >> i) & 1) ? 0.5 : -0.5);
        for (int i = 0; i < L - 1; ++i) {
            const bool bi = (s >> i) & 1;
            const bool bj = (s >> (i + 1)) & 1;
            diag += (bi == bj) ? 0.25 : -0.25;
            if (bi != bj) {
                // S+S- + S-S+ term flips the antialigned pair
                const std::uint32_t t = s ^ (std::uint32_t{3} << i);
                h(pos[t], k) += 0.5;
            }
        }
        h(k, k) += diag;
    }
    return h;
}

// Full-space Hamiltonian; used for small-L cross checks.
inline Eigen::MatrixXd heisenberg_full_hamiltonian(const HeisenbergParams& p) {
    std::vector<std::uint32_t> basis(std::size_t{1} << p.L);
    for (std::size_t s = 0; s < basis.size(); ++s) basis[s] = static_cast<std::uint32_t>(s);
    return heisenberg_sector_hamiltonian(p, basis);
}

// One-step unitary exp(-i H) on a single total-S^z sector. Dynamics and
// Z projections both preserve the sector, so only the initial state's
// sector block is ever needed.
struct SectorUnitary {
    int L = 0;
    std::vector<std::uint32_t> basis;
    Eigen::MatrixXcd u;

    void apply(StateVector& psi) const {
        if (psi.n_qubits() != L) throw std::invalid_argument("SectorUnitary: size mismatch");
        auto amps = psi.amplitudes();
        Eigen::VectorXcd x(basis.size());
        for (std::size_t k = 0; k < basis.size(); ++k) x(k) = amps[basis[k]];
        Eigen::VectorXcd y = u * x;
        for (Complex& a : amps) a = Complex(0.0, 0.0);
        for (std::size_t k = 0; k < basis.size(); ++k) amps[basis[k]] = y(k);
    }
};

inline SectorUnitary build_heisenberg_unitary(const HeisenbergParams& p, int n_up) {
    SectorUnitary su;
    su.L = p.L;
    su.basis = sz_sector_basis(p.L, n_up);
    Eigen::MatrixXd h = heisenberg_sector_hamiltonian(p, su.basis);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
    const Eigen::VectorXd& lam = es.eigenvalues();
    Eigen::VectorXcd phase(lam.size());
    for (Eigen::Index k = 0; k < lam.size(); ++k) phase(k) = std::polar(1.0, -lam(k));
    su.u = es.eigenvectors().cast<Complex>() * phase.asDiagonal() *
           es.eigenvectors().transpose().cast<Complex>();
    return su;
}

}  // namespace floqmon

#endif
