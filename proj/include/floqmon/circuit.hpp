#ifndef FLOQMON_CIRCUIT_HPP
#define FLOQMON_CIRCUIT_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <unordered_set>
#include <vector>

#include "floqmon/entanglement.hpp"
#include "floqmon/rmt.hpp"
#include "floqmon/statevector.hpp"
#include "floqmon/util.hpp"

namespace floqmon {

struct FloquetParams {
    int L = 12;
    double alpha = 10.0;  // disorder strength
};

// One fixed Floquet layer: L diagonalized-CUE single-qubit gates followed
// by L-1 bond gates exp(i M / alpha) applied sequentially in bond_order.
// Neighboring bond gates share a qubit and do not commute, so the order
// permutation is part of the disorder realization.
struct FloquetLayer {
    int L = 0;
    std::vector<DiagonalGate> diag_gates;       // one per site
    std::vector<Eigen::Matrix4cd> bond_gates;   // bond j acts on (j, j+1)
    std::vector<int> bond_order;                // permutation of 0..L-2

    void apply(StateVector& psi) const {
        if (psi.n_qubits() != L) throw std::invalid_argument("FloquetLayer: size mismatch");
        for (int i = 0; i < L; ++i) psi.apply_1q(diag_gates[i], i);
        for (int j : bond_order) psi.apply_2q(bond_gates[j], j, j + 1);
    }
};

inline FloquetLayer build_floquet_layer(const FloquetParams& params, Rng& rng) {
    if (params.L < 2 || params.L % 2 != 0 || params.alpha <= 0.0)
        throw std::invalid_argument("build_floquet_layer: invalid params");
    FloquetLayer layer;
    layer.L = params.L;
    layer.diag_gates.reserve(params.L);
    for (int i = 0; i < params.L; ++i) layer.diag_gates.push_back(diagonalized_cue_gate(rng));
    layer.bond_gates.reserve(params.L - 1);
    for (int j = 0; j < params.L - 1; ++j)
        layer.bond_gates.push_back(hermitian_exp(sample_gue(4, rng), 1.0 / params.alpha));
    layer.bond_order.resize(params.L - 1);
    std::iota(layer.bond_order.begin(), layer.bond_order.end(), 0);
    for (int j = params.L - 2; j > 0; --j) {
        std::uniform_int_distribution<int> pick(0, j);
        std::swap(layer.bond_order[j], layer.bond_order[pick(rng)]);
    }
    return layer;
}

struct MeasurementEvent {
    long step;  // 1-based step index; measurement happens after the layer
    int site;
};

struct MeasurementSchedule {
    double p = 0.0;
    long n_f = 0;
    std::vector<MeasurementEvent> events;  // strictly increasing step
};

// Exactly M = p*L*n_f events: M distinct steps drawn uniformly without
// replacement from {1..n_f} (at most one measurement per step), each with
// an independently uniform site.
inline MeasurementSchedule schedule_measurements(int L, double p, long n_f, Rng& rng) {
    const double m_real = p * L * static_cast<double>(n_f);
    const long M = std::lround(m_real);
    if (std::abs(m_real - M) > 1e-9 || M < 0)
        throw std::invalid_argument("schedule_measurements: p*L*n_f is not an integer");
    if (M > n_f)
        throw std::invalid_argument("schedule_measurements: more events than steps");
    MeasurementSchedule sched;
    sched.p = p;
    sched.n_f = n_f;
    if (M == 0) return sched;

    // Floyd's sampling of M distinct steps in [1, n_f]
    std::unordered_set<long> chosen;
    for (long t = n_f - M + 1; t <= n_f; ++t) {
        std::uniform_int_distribution<long> pick(1, t);
        long s = pick(rng);
        if (!chosen.insert(s).second) chosen.insert(t);
    }
    std::vector<long> steps(chosen.begin(), chosen.end());
    std::sort(steps.begin(), steps.end());
    std::uniform_int_distribution<int> site(0, L - 1);
    sched.events.reserve(M);
    for (long s : steps) sched.events.push_back({s, site(rng)});
    return sched;
}

enum class MeasurementMode { born, forced };

// Forced outcomes reproduce the Neel pattern under the default parity:
// up on 1-based odd sites (0-based even), down elsewhere.
enum class ForcedParity { neel, inverted };

inline Outcome forced_outcome(int site, ForcedParity parity) {
    bool up = (site % 2 == 0);
    if (parity == ForcedParity::inverted) up = !up;
    return up ? Outcome::up : Outcome::down;
}

// Stroboscopic half-chain entropy samples plus the windowed average.
struct EntropySeries {
    std::vector<long> sample_steps;
    std::vector<double> values;        // nats
    double window_average = 0.0;       // mean of samples with step in [n_i, n_f]
};

struct TrajectoryResult {
    std::vector<Outcome> outcomes;
    EntropySeries entropy;
    std::uint64_t realization_seed = 0;
};

struct TrajectoryOptions {
    long n_i = 0;                      // averaging window start
    long entropy_sample_stride = 100;
    MeasurementMode mode = MeasurementMode::born;
    ForcedParity parity = ForcedParity::neel;
};

// Sample grid shared by every realization of a sweep: step 0, every
// stride, and the window boundaries.
inline std::vector<long> entropy_sample_steps(long n_f, long n_i, long stride) {
    std::vector<long> steps;
    for (long n = 0; n <= n_f; n += stride) steps.push_back(n);
    for (long b : {n_i, n_f})
        if (b >= 0 && b <= n_f &&
            std::find(steps.begin(), steps.end(), b) == steps.end())
            steps.push_back(b);
    std::sort(steps.begin(), steps.end());
    return steps;
}

// One monitored trajectory from the Neel state. Each step applies the
// fixed one-step unitary; if a measurement is scheduled at that step the
// site is measured after the layer. Throws ImpossibleOutcome from forced
// projections onto zero-probability branches.
template <class Model>
TrajectoryResult run_trajectory(const Model& model, int L, const MeasurementSchedule& sched,
                                const TrajectoryOptions& opt, Rng& rng,
                                std::uint64_t seed_tag = 0) {
    StateVector psi = StateVector::neel(L);
    TrajectoryResult res;
    res.realization_seed = seed_tag;
    res.entropy.sample_steps = entropy_sample_steps(sched.n_f, opt.n_i, opt.entropy_sample_stride);
    res.entropy.values.reserve(res.entropy.sample_steps.size());
    res.outcomes.reserve(sched.events.size());

    std::size_t next_sample = 0;
    std::size_t next_event = 0;
    auto maybe_sample = [&](long n) {
        while (next_sample < res.entropy.sample_steps.size() &&
               res.entropy.sample_steps[next_sample] == n) {
            res.entropy.values.push_back(half_chain_entropy(psi));
            ++next_sample;
        }
    };
    maybe_sample(0);

    for (long n = 1; n <= sched.n_f; ++n) {
        model.apply(psi);
        if (next_event < sched.events.size() && sched.events[next_event].step == n) {
            const int site = sched.events[next_event].site;
            Outcome out;
            if (opt.mode == MeasurementMode::born) {
                out = psi.measure(site, rng);
            } else {
                out = forced_outcome(site, opt.parity);
                psi.project(site, out);
            }
            res.outcomes.push_back(out);
            ++next_event;
        }
        if (n % 256 == 0) {
            double nr = psi.squared_norm();
            if (std::abs(nr - 1.0) > 1e-8) psi.renormalize();
        }
        maybe_sample(n);
    }

    double sum = 0.0;
    long count = 0;
    for (std::size_t k = 0; k < res.entropy.sample_steps.size(); ++k) {
        long n = res.entropy.sample_steps[k];
        if (n >= opt.n_i && n <= sched.n_f) {
            sum += res.entropy.values[k];
            ++count;
        }
    }
    res.entropy.window_average = (count > 0) ? sum / count : 0.0;
    return res;
}

// |Delta S_bar| between two sweeps on the same disorder grid.
inline std::vector<double> delta_entropy(const std::vector<double>& sbar_measured,
                                         const std::vector<double>& sbar_unitary) {
    if (sbar_measured.size() != sbar_unitary.size())
        throw std::invalid_argument("delta_entropy: mismatched grids");
    std::vector<double> d(sbar_measured.size());
    for (std::size_t i = 0; i < d.size(); ++i)
        d[i] = std::abs(sbar_measured[i] - sbar_unitary[i]);
    return d;
}

// Dense 2^L x 2^L matrix of any one-step model, built column by column.
template <class Model>
Eigen::MatrixXcd dense_operator(const Model& model, int L) {
    const std::size_t dim = std::size_t{1} << L;
    Eigen::MatrixXcd u(dim, dim);
    for (std::size_t c = 0; c < dim; ++c) {
        StateVector psi(L);
        auto amps = psi.amplitudes();
        amps[0] = Complex(0.0, 0.0);
        amps[c] = Complex(1.0, 0.0);
        model.apply(psi);
        for (std::size_t r = 0; r < dim; ++r) u(r, c) = psi.amplitudes()[r];
    }
    return u;
}

// Half-chain entropy of [one_step]^n |Neel> for very large n, via the
// Schur form of the unitary (diagonal for normal matrices). p = 0 only.
inline double long_run_entropy(const Eigen::MatrixXcd& one_step, int L, double n_steps) {
    Eigen::ComplexSchur<Eigen::MatrixXcd> schur(one_step, /*computeU=*/true);
    const Eigen::MatrixXcd& q = schur.matrixU();
    const std::size_t dim = std::size_t{1} << L;
    StateVector psi0 = StateVector::neel(L);
    Eigen::VectorXcd v(dim);
    for (std::size_t i = 0; i < dim; ++i) v(i) = psi0.amplitudes()[i];
    Eigen::VectorXcd c = q.adjoint() * v;
    const double two_pi = 2.0 * M_PI;
    for (std::size_t k = 0; k < dim; ++k) {
        double theta = std::arg(schur.matrixT()(k, k));
        c(k) *= std::polar(1.0, std::fmod(theta * n_steps, two_pi));
    }
    Eigen::VectorXcd w = q * c;
    StateVector psi(L);
    auto amps = psi.amplitudes();
    for (std::size_t i = 0; i < dim; ++i) amps[i] = w(i);
    psi.renormalize();
    return half_chain_entropy(psi);
}

}  // namespace floqmon

#endif
