#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "config.hpp"
#include "experiment.hpp"
#include "inequalities.hpp"

namespace wavestab::cli {

enum ExitCode : int { kOk = 0, kUnsatisfied = 1, kUsage = 2, kBlowUp = 3 };

namespace fs = std::filesystem;

inline ParsedConfig load_validated(const std::string& path) {
    ParsedConfig pc = load_config(path);
    validate(pc);
    return pc;
}

/// Creates dir (and parents); false when it cannot be created or written.
inline bool prepare_dir(const fs::path& dir, std::ostream& err) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) {
        err << "error: cannot create output directory " << dir << '\n';
        return false;
    }
    return true;
}

inline bool write_text(const fs::path& path, const std::string& text, std::ostream& err) {
    std::ofstream out(path, std::ios::binary);
    out << text;
    out.close();
    if (!out) {
        err << "error: cannot write " << path << '\n';
        return false;
    }
    return true;
}

inline bool write_run_outputs(const fs::path& dir, const ExperimentResult& r, std::ostream& err) {
    if (!prepare_dir(dir, err)) return false;
    std::ostringstream csv;
    write_trajectory_csv(csv, r.run.records);
    return write_text(dir / "trajectory.csv", csv.str(), err) &&
           write_text(dir / "report.json", to_json(r).dump(2) + "\n", err);
}

inline int cmd_check(const std::string& config_path, std::ostream& out, std::ostream& err) {
    try {
        const auto pc = load_validated(config_path);
        const GainReport r = gain_report_for(pc.config);
        out << to_json(r).dump(2) << '\n';
        return r.satisfied ? kOk : kUnsatisfied;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    }
}

inline int cmd_run(const std::string& config_path, const std::string& out_dir, std::ostream& out, std::ostream& err) {
    ExperimentResult r;
    try {
        r = run_experiment(load_validated(config_path).config);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    }
    if (!write_run_outputs(out_dir, r, err)) return kUsage;
    const auto& v = r.verification;
    out << "gain " << (r.gain.satisfied ? "satisfied" : "not satisfied") << " (" << r.gain.theorem << ")";
    if (v.fit) out << "; fitted rate " << v.fit->rate << ", r^2 " << v.fit->r_squared;
    out << "; verified " << (v.verified ? "yes" : "no") << '\n';
    for (const auto& n : r.gain.notes) out << "note: " << n << '\n';
    if (r.run.blew_up) {
        err << "blow-up at t = " << r.run.blowup_time << '\n';
        return kBlowUp;
    }
    return kOk;
}

struct SweepRow {
    double value = 0.0;
    bool gain_satisfied = false;
    std::optional<double> fitted_rate;
    bool verified = false;
};

inline ExperimentConfig with_param(ExperimentConfig c, const std::string& param, double value) {
    if (param == "mu") {
        c.mu = value;
    } else {
        if (value != std::floor(value) || value < 1) throw std::invalid_argument("N values must be positive integers");
        c.n = static_cast<int>(value);
    }
    return c;
}

inline int cmd_sweep(const std::string& config_path, const std::string& param, const std::string& values,
                     const std::string& out_dir, int jobs, std::ostream& out, std::ostream& err) {
    ParsedConfig pc;
    std::vector<double> vals;
    try {
        if (param != "mu" && param != "N") throw std::invalid_argument("--param must be mu or N");
        if (jobs < 1) throw std::invalid_argument("--jobs must be >= 1");
        pc = load_validated(config_path);
        vals = parse_real_list(values);
        std::sort(vals.begin(), vals.end());
        for (double v : vals) {
            ParsedConfig one = pc;
            one.config = with_param(pc.config, param, v);
            validate(one);
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    }
    if (!prepare_dir(out_dir, err)) return kUsage;

    std::vector<SweepRow> rows(vals.size());
    std::vector<std::string> failures(vals.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < vals.size(); i = next++) {
            const ExperimentResult r = run_experiment(with_param(pc.config, param, vals[i]));
            std::ostringstream werr;
            if (!write_run_outputs(fs::path(out_dir) / ("run_" + std::to_string(i)), r, werr)) failures[i] = werr.str();
            rows[i] = {vals[i], r.gain.satisfied,
                       r.verification.fit ? std::optional<double>(r.verification.fit->rate) : std::nullopt,
                       r.verification.verified};
        }
    };
    {
        std::vector<std::jthread> pool;
        const std::size_t n = std::min<std::size_t>(static_cast<std::size_t>(jobs), std::max<std::size_t>(1, vals.size()));
        for (std::size_t k = 0; k < n; ++k) pool.emplace_back(worker);
    }
    for (const auto& f : failures)
        if (!f.empty()) {
            err << f;
            return kUsage;
        }

    std::ostringstream csv;
    csv << "value,gain_satisfied,fitted_rate,verified\n";
    for (const auto& r : rows)
        csv << format_real(r.value) << ',' << (r.gain_satisfied ? "true" : "false") << ','
            << (r.fitted_rate ? format_real(*r.fitted_rate) : "") << ',' << (r.verified ? "true" : "false") << '\n';
    if (!write_text(fs::path(out_dir) / "summary.csv", csv.str(), err)) return kUsage;
    out << csv.str();
    return kOk;
}

/// Runs the inequality suite on a 512-cell grid of (0, 1).
inline int cmd_lemmas(std::uint64_t seed, int samples, const std::string& out_dir, std::ostream& out,
                      std::ostream& err) {
    std::vector<InequalityReport> reports;
    try {
        reports = run_inequality_suite(seed, samples, Grid1D(1.0, 512, Boundary::Neumann));
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    }
    nlohmann::json j{{"seed", seed}, {"samples", samples}, {"passes", suite_passes(reports)}};
    j["reports"] = nlohmann::json::array();
    for (const auto& r : reports) j["reports"].push_back(to_json(r));
    if (!out_dir.empty()) {
        if (!prepare_dir(out_dir, err) || !write_text(fs::path(out_dir) / "lemmas.json", j.dump(2) + "\n", err))
            return kUsage;
    }
    for (const auto& r : reports)
        out << r.name << ": " << r.violations << " violations in " << r.samples << " samples, best constant "
            << r.empirical_best_constant << " (stated " << r.stated_constant << ")"
            << (r.informational ? " [informational]" : "") << '\n';
    return suite_passes(reports) ? kOk : kUnsatisfied;
}

}  // namespace wavestab::cli
