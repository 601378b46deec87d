#ifndef FLOQMON_RUNNER_HPP
#define FLOQMON_RUNNER_HPP

#include <atomic>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <thread>
#include <vector>

#include <json.hpp>

#include "floqmon/circuit.hpp"
#include "floqmon/config.hpp"
#include "floqmon/dataset.hpp"
#include "floqmon/heisenberg.hpp"
#include "floqmon/util.hpp"

namespace floqmon {

namespace fs = std::filesystem;

inline std::string point_tag(std::size_t index) {
    std::ostringstream os;
    os << "d" << std::setw(2) << std::setfill('0') << index;
    return os.str();
}

inline int effective_workers(const RunConfig& c) {
    if (const char* env = std::getenv("FLOQMON_WORKERS")) {
        int w = std::atoi(env);
        if (w > 0) return w;
    }
    if (c.workers > 0) return c.workers;
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

namespace detail {

inline double sector_long_run_entropy(const HeisenbergParams& hp, double n_steps);

struct RealizationOutput {
    std::vector<Outcome> outcomes;
    std::vector<double> entropy_values;
    double sbar = 0.0;
    double long_run_s = 0.0;
    std::uint64_t seed = 0;
    long discarded = 0;
};

// Fixed per-realization work unit; everything derives from the seed.
inline RealizationOutput run_realization(const RunConfig& cfg, double disorder,
                                         std::size_t d_idx, long r) {
    RealizationOutput out;
    out.seed = derive_seed(cfg.master_seed, d_idx, static_cast<std::uint64_t>(r));
    TrajectoryOptions opt;
    opt.n_i = cfg.n_i;
    opt.entropy_sample_stride = cfg.entropy_sample_stride;
    opt.mode = cfg.mode;
    opt.parity = cfg.parity;

    for (long attempt = 0;; ++attempt) {
        if (attempt > 1000)
            throw std::runtime_error("run_realization: too many discarded forced trajectories");
        const std::uint64_t seed =
            (attempt == 0) ? out.seed : splitmix64(out.seed + static_cast<std::uint64_t>(attempt));
        Rng rng(seed);
        try {
            TrajectoryResult traj;
            if (cfg.model == ModelKind::floquet) {
                FloquetLayer layer = build_floquet_layer({cfg.L, disorder}, rng);
                MeasurementSchedule sched = schedule_measurements(cfg.L, cfg.p, cfg.n_f, rng);
                traj = run_trajectory(layer, cfg.L, sched, opt, rng, seed);
                if (cfg.long_run_n > 0.0)
                    out.long_run_s = long_run_entropy(dense_operator(layer, cfg.L), cfg.L,
                                                      cfg.long_run_n);
            } else {
                HeisenbergParams hp = sample_heisenberg_params(cfg.L, disorder, rng);
                SectorUnitary su = build_heisenberg_unitary(hp, cfg.L / 2);
                MeasurementSchedule sched = schedule_measurements(cfg.L, cfg.p, cfg.n_f, rng);
                traj = run_trajectory(su, cfg.L, sched, opt, rng, seed);
                if (cfg.long_run_n > 0.0) out.long_run_s = sector_long_run_entropy(hp, cfg.long_run_n);
            }
            out.outcomes = std::move(traj.outcomes);
            out.entropy_values = std::move(traj.entropy.values);
            out.sbar = traj.entropy.window_average;
            out.seed = seed;
            return out;
        } catch (const ImpossibleOutcome&) {
            ++out.discarded;
        }
    }
}

inline double sector_long_run_entropy(const HeisenbergParams& hp, double n_steps) {
    std::vector<std::uint32_t> basis = sz_sector_basis(hp.L, hp.L / 2);
    Eigen::MatrixXd h = heisenberg_sector_hamiltonian(hp, basis);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
    StateVector psi0 = StateVector::neel(hp.L);
    Eigen::VectorXcd x(basis.size());
    for (std::size_t k = 0; k < basis.size(); ++k) x(k) = psi0.amplitudes()[basis[k]];
    Eigen::VectorXcd c = es.eigenvectors().transpose().cast<Complex>() * x;
    const double two_pi = 2.0 * M_PI;
    for (Eigen::Index k = 0; k < c.size(); ++k)
        c(k) *= std::polar(1.0, -std::fmod(es.eigenvalues()(k) * n_steps, two_pi));
    Eigen::VectorXcd y = es.eigenvectors().cast<Complex>() * c;
    StateVector psi(hp.L);
    auto amps = psi.amplitudes();
    amps[0] = Complex(0.0, 0.0);
    for (std::size_t k = 0; k < basis.size(); ++k) amps[basis[k]] = y(k);
    psi.renormalize();
    return half_chain_entropy(psi);
}

inline void write_csv_header(std::ofstream& f, const std::vector<std::string>& cols) {
    for (std::size_t i = 0; i < cols.size(); ++i) f << (i ? "," : "") << cols[i];
    f << "\n";
}

}  // namespace detail

struct SweepPointFiles {
    fs::path entropy_mean;
    fs::path sbar;
    fs::path dataset_bin;
    fs::path dataset_csv;
    fs::path long_run;  // only when long_run_n > 0
};

inline SweepPointFiles point_files(const fs::path& dir, const std::string& tag) {
    return {dir / ("entropy_mean_" + tag + ".csv"), dir / ("sbar_" + tag + ".csv"),
            dir / ("dataset_" + tag + ".bin"), dir / ("dataset_" + tag + ".csv"),
            dir / ("longrun_" + tag + ".csv")};
}

// Runs the configured sweep into config.output_dir. Resumable: disorder
// points already marked done in the manifest are skipped, so a rerun of a
// completed directory rewrites nothing.
inline fs::path simulate_run(const RunConfig& cfg) {
    const fs::path dir(cfg.output_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create run directory: " + dir.string());

    const fs::path manifest_path = dir / "manifest.json";
    nlohmann::json manifest;
    if (fs::exists(manifest_path)) {
        std::ifstream mf(manifest_path);
        try {
            mf >> manifest;
        } catch (const nlohmann::json::exception&) {
            throw IoError("corrupt manifest: " + manifest_path.string());
        }
        if (manifest.at("config") != to_json(cfg))
            throw ConfigError("run directory holds a different config: " + dir.string());
    } else {
        manifest["config"] = to_json(cfg);
        manifest["conventions"] = convention_flags();
        manifest["code_version"] = kVersion;
        manifest["complete"] = false;
        manifest["disorder_points"] = nlohmann::json::array();
        for (std::size_t d = 0; d < cfg.disorder.size(); ++d)
            manifest["disorder_points"].push_back(
                {{"index", d},
                 {"value", cfg.disorder[d]},
                 {"tag", point_tag(d)},
                 {"status", "pending"},
                 {"discarded", 0}});
        std::ofstream mf(manifest_path);
        mf << manifest.dump(2) << "\n";
        if (!mf) throw IoError("cannot write manifest: " + manifest_path.string());
    }

    const long M = cfg.events_per_trajectory();
    const std::vector<long> steps = entropy_sample_steps(cfg.n_f, cfg.n_i, cfg.entropy_sample_stride);
    const int workers = effective_workers(cfg);

    for (std::size_t d = 0; d < cfg.disorder.size(); ++d) {
        auto& point = manifest["disorder_points"][d];
        const std::string tag = point_tag(d);
        const SweepPointFiles files = point_files(dir, tag);
        if (point["status"] == "done" && fs::exists(files.entropy_mean) &&
            fs::exists(files.dataset_bin))
            continue;

        const long n_r = cfg.n_realizations;
        std::vector<double> sum_s(steps.size(), 0.0), sumsq_s(steps.size(), 0.0);
        std::vector<double> sbar(n_r, 0.0), long_run_s;
        std::vector<std::uint64_t> seeds(n_r, 0);
        if (cfg.long_run_n > 0.0) long_run_s.assign(n_r, 0.0);
        Dataset dataset(n_r, static_cast<std::size_t>(M));
        long discarded = 0;

        // Block-wise work pool: workers fill a block, the main thread
        // reduces it in realization order so output is scheduling-free.
        const long block = 512;
        for (long base = 0; base < n_r; base += block) {
            const long count = std::min(block, n_r - base);
            std::vector<detail::RealizationOutput> results(count);
            std::atomic<long> next{0};
            std::exception_ptr error;
            std::mutex error_mutex;
            auto work = [&]() {
                for (;;) {
                    const long k = next.fetch_add(1);
                    if (k >= count) return;
                    try {
                        results[k] = detail::run_realization(cfg, cfg.disorder[d], d, base + k);
                    } catch (...) {
                        std::lock_guard<std::mutex> lock(error_mutex);
                        if (!error) error = std::current_exception();
                        return;
                    }
                }
            };
            if (workers <= 1) {
                work();
            } else {
                std::vector<std::thread> pool;
                for (int w = 0; w < workers; ++w) pool.emplace_back(work);
                for (auto& t : pool) t.join();
            }
            if (error) std::rethrow_exception(error);

            for (long k = 0; k < count; ++k) {
                const long r = base + k;
                const auto& res = results[k];
                for (std::size_t s = 0; s < steps.size(); ++s) {
                    sum_s[s] += res.entropy_values[s];
                    sumsq_s[s] += res.entropy_values[s] * res.entropy_values[s];
                }
                sbar[r] = res.sbar;
                seeds[r] = res.seed;
                if (cfg.long_run_n > 0.0) long_run_s[r] = res.long_run_s;
                discarded += res.discarded;
                for (long c = 0; c < M; ++c)
                    dataset.at(r, c) = static_cast<std::uint8_t>(res.outcomes[c]);
            }
        }

        {
            std::ofstream f(files.entropy_mean);
            if (!f) throw IoError("cannot write " + files.entropy_mean.string());
            f << std::setprecision(17);
            detail::write_csv_header(f, {"step", "S_mean_nats", "S_se_nats"});
            for (std::size_t s = 0; s < steps.size(); ++s) {
                const double mean = sum_s[s] / n_r;
                double se = 0.0;
                if (n_r > 1) {
                    const double var = (sumsq_s[s] - n_r * mean * mean) / (n_r - 1.0);
                    se = std::sqrt(std::max(var, 0.0) / n_r);
                }
                f << steps[s] << "," << mean << "," << se << "\n";
            }
        }
        {
            std::ofstream f(files.sbar);
            if (!f) throw IoError("cannot write " + files.sbar.string());
            f << std::setprecision(17);
            detail::write_csv_header(f, {"realization", "seed", "sbar_nats"});
            for (long r = 0; r < n_r; ++r)
                f << r << "," << seeds[r] << "," << sbar[r] << "\n";
        }
        write_dataset(files.dataset_bin, dataset);
        write_dataset_csv(files.dataset_csv, dataset);
        if (cfg.long_run_n > 0.0) {
            std::ofstream f(files.long_run);
            f << std::setprecision(17);
            detail::write_csv_header(f, {"realization", "step", "S_nats"});
            for (long r = 0; r < n_r; ++r)
                f << r << "," << cfg.long_run_n << "," << long_run_s[r] << "\n";
        }

        point["status"] = "done";
        point["discarded"] = discarded;
        point["seeds"] = seeds;
        bool all_done = true;
        for (const auto& pt : manifest["disorder_points"])
            if (pt["status"] != "done") all_done = false;
        manifest["complete"] = all_done;
        std::ofstream mf(manifest_path);
        mf << manifest.dump(2) << "\n";
        if (!mf) throw IoError("cannot write manifest: " + manifest_path.string());
    }
    return dir;
}

}  // namespace floqmon

#endif
