#ifndef FLOQMON_POSTPROCESS_HPP
#define FLOQMON_POSTPROCESS_HPP

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "floqmon/analysis.hpp"
#include "floqmon/config.hpp"
#include "floqmon/dataset.hpp"
#include "floqmon/entanglement.hpp"
#include "floqmon/runner.hpp"

namespace floqmon {

namespace detail {

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

inline CsvTable read_csv(const fs::path& path) {
    std::ifstream f(path);
    if (!f) throw IoError("missing file: " + path.string());
    CsvTable t;
    std::string line;
    if (!std::getline(f, line)) throw IoError("empty file: " + path.string());
    std::stringstream hs(line);
    std::string cell;
    while (std::getline(hs, cell, ',')) t.header.push_back(cell);
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ls(line);
        while (std::getline(ls, cell, ',')) {
            try {
                row.push_back(std::stod(cell));
            } catch (const std::exception&) {
                row.push_back(std::nan(""));  // non-numeric cell (e.g. a tag)
            }
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

inline std::size_t column_index(const CsvTable& t, const std::string& name,
                                const fs::path& path) {
    for (std::size_t i = 0; i < t.header.size(); ++i)
        if (t.header[i] == name) return i;
    throw IoError("missing column '" + name + "' in " + path.string());
}

inline nlohmann::json load_manifest(const fs::path& dir) {
    const fs::path path = dir / "manifest.json";
    std::ifstream f(path);
    if (!f) throw IoError("missing manifest: " + path.string());
    nlohmann::json m;
    try {
        f >> m;
    } catch (const nlohmann::json::exception&) {
        throw IoError("corrupt manifest: " + path.string());
    }
    return m;
}

struct MeanSe {
    double mean = 0.0;
    double se = 0.0;
};

inline MeanSe mean_se(const std::vector<double>& xs) {
    MeanSe r;
    if (xs.empty()) return r;
    for (double x : xs) r.mean += x;
    r.mean /= xs.size();
    if (xs.size() > 1) {
        double var = 0.0;
        for (double x : xs) var += (x - r.mean) * (x - r.mean);
        r.se = std::sqrt(var / (xs.size() - 1.0) / xs.size());
    }
    return r;
}

}  // namespace detail

struct AnalyzeOptions {
    bool centered = false;       // additionally emit the centered PCA variant
    int baseline_repeats = 16;
    std::optional<std::uint64_t> baseline_seed;  // default derives from master_seed
};

// Analyzes every completed disorder point of a run directory: PCA
// spectrum, MI matrix, xi curve with random baseline, slope and gap.
inline void analyze_run(const fs::path& dir, const AnalyzeOptions& opts = {}) {
    nlohmann::json manifest = detail::load_manifest(dir);
    RunConfig cfg = config_from_json(manifest.at("config"));
    const std::uint64_t base_seed =
        opts.baseline_seed ? *opts.baseline_seed : splitmix64(cfg.master_seed ^ 0x62617365ULL);

    std::ofstream summary(dir / "analysis_summary.csv");
    if (!summary) throw IoError("cannot write " + (dir / "analysis_summary.csv").string());
    summary << std::setprecision(17);
    summary << "tag,disorder,M,N_r,pca_gap";
    if (opts.centered) summary << ",pca_gap_centered";
    summary << ",slope_k,fit_rmse,fit_m_lo,fit_m_hi\n";

    for (const auto& point : manifest.at("disorder_points")) {
        if (point.at("status") != "done") continue;
        const std::string tag = point.at("tag").get<std::string>();
        const double disorder = point.at("value").get<double>();
        const SweepPointFiles files = point_files(dir, tag);
        if (!fs::exists(files.dataset_bin))
            throw IoError("missing dataset: " + files.dataset_bin.string());
        Dataset data = read_dataset(files.dataset_bin);
        if (data.n_measurements < 2 || data.n_realizations < 2) continue;  // p = 0 run

        PcaSpectrum pca = pca_spectrum(data, false);
        std::optional<PcaSpectrum> pca_centered;
        if (opts.centered) pca_centered = pca_spectrum(data, true);
        {
            std::ofstream f(dir / ("pca_spectrum_" + tag + ".csv"));
            f << std::setprecision(17) << "rank,eigenvalue";
            if (opts.centered) f << ",eigenvalue_centered";
            f << "\n";
            for (std::size_t k = 0; k < pca.eigenvalues.size(); ++k) {
                f << (k + 1) << "," << pca.eigenvalues[k];
                if (opts.centered) f << "," << pca_centered->eigenvalues[k];
                f << "\n";
            }
        }

        MIMatrix mi = mi_matrix(data);
        {
            std::ofstream f(dir / ("mi_matrix_" + tag + ".csv"));
            f << std::setprecision(17) << "i";
            for (std::size_t j = 0; j < mi.m; ++j) f << ",I_j" << j;
            f << "\n";
            for (std::size_t i = 0; i < mi.m; ++i) {
                f << i;
                for (std::size_t j = 0; j < mi.m; ++j) f << "," << mi.at(i, j);
                f << "\n";
            }
        }

        std::vector<double> xi = correlation_curve(mi);
        Rng rng(splitmix64(base_seed ^ point.at("index").get<std::uint64_t>()));
        BaselineCurve base = random_baseline(mi.m, data.n_realizations, rng, opts.baseline_repeats);
        std::vector<double> normalized(xi.size());
        for (std::size_t k = 0; k < xi.size(); ++k)
            normalized[k] = (xi[k] - base.xi_mean[k]) / cfg.p;
        auto [m_lo, m_hi] = default_fit_window(mi.m);
        SlopeFit fit = fit_slope(normalized, m_lo, m_hi);
        {
            std::ofstream f(dir / ("xi_curve_" + tag + ".csv"));
            f << std::setprecision(17)
              << "m,xi,xi_rand,xi_rand_se,xi_minus_rand_over_p\n";
            for (std::size_t k = 0; k < xi.size(); ++k)
                f << (k + 2) << "," << xi[k] << "," << base.xi_mean[k] << "," << base.xi_se[k]
                  << "," << normalized[k] << "\n";
        }

        summary << tag << "," << disorder << "," << mi.m << "," << data.n_realizations << ","
                << pca.gap;
        if (opts.centered) summary << "," << pca_centered->gap;
        summary << "," << fit.k << "," << fit.rmse << "," << m_lo << "," << m_hi << "\n";
    }

    nlohmann::json meta{{"baseline_repeats", opts.baseline_repeats},
                        {"baseline_seed", base_seed},
                        {"centered_variant", opts.centered},
                        {"mi_log_base", "natural (nats)"},
                        {"code_version", kVersion}};
    std::ofstream mf(dir / "analysis_meta.json");
    mf << meta.dump(2) << "\n";
}

// Figure-data bundle assembled from one or more completed run directories:
// per-run entropy series and sbar summaries, |Delta S_bar| for p = 0 /
// p > 0 pairs, and the dataset-structure summary where analysis exists.
inline void report_runs(const std::vector<fs::path>& dirs, const fs::path& out_dir) {
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create report directory: " + out_dir.string());

    struct PointSummary {
        std::string run;
        ModelKind model;
        int L;
        double p;
        std::string mode;
        double disorder;
        long n_r;
        double sbar, sbar_se;
    };
    std::vector<PointSummary> points;
    std::vector<std::string> missing;

    std::ofstream series(out_dir / "entropy_series.csv");
    series << std::setprecision(17)
           << "run,model,L,p,mode,disorder,step,S_mean_nats,S_se_nats\n";
    std::ofstream structure(out_dir / "structure_summary.csv");
    structure << std::setprecision(17)
              << "run,model,L,p,disorder,pca_gap,slope_k,fit_rmse\n";

    for (const fs::path& dir : dirs) {
        nlohmann::json manifest = detail::load_manifest(dir);
        RunConfig cfg = config_from_json(manifest.at("config"));
        const std::string model = cfg.model == ModelKind::floquet ? "floquet" : "heisenberg";
        const std::string mode = cfg.mode == MeasurementMode::born ? "born" : "forced";
        const bool wants_analysis = cfg.p > 0.0 && cfg.events_per_trajectory() >= 2;
        detail::CsvTable analysis;
        std::size_t col_disorder = 0, col_gap = 0, col_k = 0, col_rmse = 0;
        bool have_analysis = false;
        if (wants_analysis) {
            const fs::path apath = dir / "analysis_summary.csv";
            if (!fs::exists(apath)) {
                missing.push_back(apath.string());
            } else {
                analysis = detail::read_csv(apath);
                col_disorder = detail::column_index(analysis, "disorder", apath);
                col_gap = detail::column_index(analysis, "pca_gap", apath);
                col_k = detail::column_index(analysis, "slope_k", apath);
                col_rmse = detail::column_index(analysis, "fit_rmse", apath);
                have_analysis = true;
            }
        }

        for (const auto& point : manifest.at("disorder_points")) {
            if (point.at("status") != "done") {
                missing.push_back(dir.string() + ": disorder point " +
                                  point.at("tag").get<std::string>() + " not simulated");
                continue;
            }
            const std::string tag = point.at("tag").get<std::string>();
            const double disorder = point.at("value").get<double>();
            const SweepPointFiles files = point_files(dir, tag);
            detail::CsvTable em = detail::read_csv(files.entropy_mean);
            for (const auto& row : em.rows)
                series << dir.string() << "," << model << "," << cfg.L << "," << cfg.p << ","
                       << mode << "," << disorder << "," << long(row[0]) << "," << row[1] << ","
                       << row[2] << "\n";
            detail::CsvTable sb = detail::read_csv(files.sbar);
            std::vector<double> sbar;
            sbar.reserve(sb.rows.size());
            for (const auto& row : sb.rows) sbar.push_back(row[2]);
            detail::MeanSe ms = detail::mean_se(sbar);
            points.push_back({dir.string(), cfg.model, cfg.L, cfg.p, mode, disorder,
                              long(sbar.size()), ms.mean, ms.se});
            if (have_analysis)
                for (const auto& row : analysis.rows)
                    if (row.size() > col_rmse && row[col_disorder] == disorder)
                        structure << dir.string() << "," << model << "," << cfg.L << "," << cfg.p
                                  << "," << disorder << "," << row[col_gap] << "," << row[col_k]
                                  << "," << row[col_rmse] << "\n";
        }
    }

    if (!missing.empty()) {
        std::string msg = "report: incomplete inputs:";
        for (const auto& m : missing) msg += "\n  " + m;
        throw IoError(msg);
    }

    // |Delta S_bar| for every (measured, unitary) pair sharing model/L/disorder
    {
        std::ofstream f(out_dir / "delta_sbar.csv");
        f << std::setprecision(17)
          << "model,L,disorder,p,mode,sbar_measured,sbar_measured_se,sbar_unitary,"
             "sbar_unitary_se,abs_delta,delta_se\n";
        for (const auto& a : points) {
            if (a.p <= 0.0) continue;
            for (const auto& b : points) {
                if (b.p != 0.0 || b.model != a.model || b.L != a.L || b.disorder != a.disorder)
                    continue;
                const double delta = std::abs(a.sbar - b.sbar);
                const double se = std::sqrt(a.sbar_se * a.sbar_se + b.sbar_se * b.sbar_se);
                f << (a.model == ModelKind::floquet ? "floquet" : "heisenberg") << "," << a.L
                  << "," << a.disorder << "," << a.p << "," << a.mode << "," << a.sbar << ","
                  << a.sbar_se << "," << b.sbar << "," << b.sbar_se << "," << delta << "," << se
                  << "\n";
            }
        }
    }

    std::ofstream txt(out_dir / "summary.txt");
    txt << std::left << std::setw(28) << "run" << std::setw(11) << "model" << std::setw(4) << "L"
        << std::setw(11) << "disorder" << std::setw(11) << "p" << std::setw(8) << "mode"
        << std::setw(8) << "N_r" << std::setw(12) << "sbar" << std::setw(12) << "sbar_se"
        << std::setw(12) << "sbar/S_P" << "\n";
    txt << std::setprecision(6);
    for (const auto& pt : points)
        txt << std::left << std::setw(28) << pt.run << std::setw(11)
            << (pt.model == ModelKind::floquet ? "floquet" : "heisenberg") << std::setw(4) << pt.L
            << std::setw(11) << pt.disorder << std::setw(11) << pt.p << std::setw(8) << pt.mode
            << std::setw(8) << pt.n_r << std::setw(12) << pt.sbar << std::setw(12) << pt.sbar_se
            << std::setw(12) << pt.sbar / page_value(pt.L) << "\n";
}

}  // namespace floqmon

#endif
