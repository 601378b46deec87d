#ifndef FLOQMON_STATEVECTOR_HPP
#define FLOQMON_STATEVECTOR_HPP

#include <Eigen/Dense>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "floqmon/rmt.hpp"
#include "floqmon/util.hpp"

namespace floqmon {

// Serialized as 1 (up) / 0 (down).
enum class Outcome : std::uint8_t { down = 0, up = 1 };

// Thrown when a projection is requested onto a branch of probability
// below eps_proj (only reachable through forced measurements).
struct ImpossibleOutcome : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr double kEpsProj = 1e-12;

// Dense amplitude vector over 2^L computational basis states.
//
// Bit convention: site i maps to bit i of the basis index (site 0 is the
// least significant bit), and bit value 1 means spin up. Gate matrices are
// indexed by bit value; for two-qubit gates the index is
// bit(site_a) + 2*bit(site_b).
class StateVector {
  public:
    explicit StateVector(int n_qubits)
        : n_qubits_(n_qubits), amps_(std::size_t{1} << n_qubits, Complex(0.0, 0.0)) {
        if (n_qubits < 1 || n_qubits > 24)
            throw std::invalid_argument("StateVector: unsupported qubit count");
        amps_[0] = Complex(1.0, 0.0);
    }

    // Neel state |up down up down ...> with site 0 up.
    static StateVector neel(int n_qubits) {
        if (n_qubits < 2 || n_qubits % 2 != 0)
            throw std::invalid_argument("neel: L must be even and >= 2");
        StateVector psi(n_qubits);
        psi.amps_[0] = Complex(0.0, 0.0);
        std::size_t idx = 0;
        for (int i = 0; i < n_qubits; i += 2) idx |= (std::size_t{1} << i);
        psi.amps_[idx] = Complex(1.0, 0.0);
        return psi;
    }

    int n_qubits() const { return n_qubits_; }
    std::size_t dim() const { return amps_.size(); }
    std::span<const Complex> amplitudes() const { return amps_; }
    std::span<Complex> amplitudes() { return amps_; }

    double squared_norm() const {
        double s = 0.0;
        for (const Complex& a : amps_) s += std::norm(a);
        return s;
    }

    void renormalize() {
        double n = std::sqrt(squared_norm());
        for (Complex& a : amps_) a /= n;
    }

    void apply_1q(const Eigen::Matrix2cd& g, int site) {
        check_site(site);
        const std::size_t mask = std::size_t{1} << site;
        const Complex g00 = g(0, 0), g01 = g(0, 1), g10 = g(1, 0), g11 = g(1, 1);
        const std::size_t n = amps_.size();
        for (std::size_t i = 0; i < n; ++i) {
            if (i & mask) continue;
            const Complex a0 = amps_[i];
            const Complex a1 = amps_[i | mask];
            amps_[i] = g00 * a0 + g01 * a1;
            amps_[i | mask] = g10 * a0 + g11 * a1;
        }
    }

    void apply_1q(const DiagonalGate& g, int site) {
        check_site(site);
        const std::size_t mask = std::size_t{1} << site;
        const std::size_t n = amps_.size();
        for (std::size_t i = 0; i < n; ++i) amps_[i] *= g.phases[(i & mask) ? 1 : 0];
    }

    void apply_2q(const Eigen::Matrix4cd& g, int site_a, int site_b) {
        check_site(site_a);
        check_site(site_b);
        if (site_a == site_b) throw std::invalid_argument("apply_2q: site collision");
        const std::size_t ma = std::size_t{1} << site_a;
        const std::size_t mb = std::size_t{1} << site_b;
        const std::size_t n = amps_.size();
        for (std::size_t i = 0; i < n; ++i) {
            if (i & (ma | mb)) continue;
            Complex v[4] = {amps_[i], amps_[i | ma], amps_[i | mb], amps_[i | ma | mb]};
            for (int r = 0; r < 4; ++r) {
                Complex acc = g(r, 0) * v[0] + g(r, 1) * v[1] + g(r, 2) * v[2] + g(r, 3) * v[3];
                std::size_t idx = i | ((r & 1) ? ma : 0) | ((r & 2) ? mb : 0);
                amps_[idx] = acc;
            }
        }
    }

    // Probability of measuring spin up at `site`.
    double born_probability(int site) const {
        check_site(site);
        const std::size_t mask = std::size_t{1} << site;
        double p = 0.0;
        for (std::size_t i = 0; i < amps_.size(); ++i)
            if (i & mask) p += std::norm(amps_[i]);
        return p;
    }

    // Projects onto the given outcome and renormalizes.
    void project(int site, Outcome outcome) {
        const double p_up = born_probability(site);
        const double p = (outcome == Outcome::up) ? p_up : 1.0 - p_up;
        if (p < kEpsProj)
            throw ImpossibleOutcome("project: outcome probability below eps_proj");
        const std::size_t mask = std::size_t{1} << site;
        const std::size_t want = (outcome == Outcome::up) ? mask : 0;
        const double scale = 1.0 / std::sqrt(p);
        for (std::size_t i = 0; i < amps_.size(); ++i)
            amps_[i] = ((i & mask) == want) ? amps_[i] * scale : Complex(0.0, 0.0);
    }

    // Born-rule measurement: samples the outcome and collapses the state.
    Outcome measure(int site, Rng& rng) {
        const double p_up = born_probability(site);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        Outcome outcome = (u(rng) < p_up) ? Outcome::up : Outcome::down;
        project(site, outcome);
        return outcome;
    }

  private:
    void check_site(int site) const {
        if (site < 0 || site >= n_qubits_)
            throw std::out_of_range("site index out of range");
    }

    int n_qubits_;
    std::vector<Complex> amps_;
};

}  // namespace floqmon

#endif
