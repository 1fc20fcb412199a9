#pragma once

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <optional>
#include <ostream>
#include <string>
#include <variant>

#include <json.hpp>

#include "analysis.hpp"
#include "config.hpp"
#include "controllers.hpp"
#include "inequalities.hpp"
#include "integrator.hpp"

namespace wavestab {

/// Gain check matching the (controller, family) pair; theorem "none" when no result applies.
inline GainReport gain_report_for(const ExperimentConfig& c) {
    const ModelSpec m = build_model(c);
    const ControllerSpec ctrl = build_controller(c);
    const bool damped = m.family == Family::DampedWave;
    if (std::holds_alternative<VolumeElements>(ctrl) && damped)
        return check_volume_gains(c.length, c.nu, c.a, c.b, c.mu, c.n);
    if (std::holds_alternative<FourierModes>(ctrl)) {
        switch (m.family) {
            case Family::DampedWave: return check_fourier_gains(c.length, c.nu, c.a, c.b, c.mu, c.n);
            case Family::NonlinearDampingWave: return check_nonlinear_gains(c.length, c.nu, c.a, c.mu, c.n, c.m);
            case Family::StronglyDampedWave: return check_strong_fourier_gains(c.length, c.nu, c.a, c.b, c.mu, c.n);
        }
    }
    if (std::holds_alternative<Nodal>(ctrl) && m.family == Family::StronglyDampedWave)
        return check_nodal_gains(c.length, c.nu, c.a, c.b, c.mu, c.n);
    if (std::holds_alternative<SubdomainControl>(ctrl) && damped) {
        auto r = check_subdomain_gains(c.length, c.a, c.b, c.mu, Subdomain{c.omega_lo, c.omega_hi}, build_grid(c));
        if (c.nu != 1.0) r.notes.push_back("subdomain conditions are stated for unit stiffness; nu is ignored");
        return r;
    }
    GainReport r;
    r.theorem = "none";
    r.notes.push_back(std::string("no theorem covers controller '") + controller_name(ctrl) + "' with family '" +
                      c.family + "'");
    return r;
}

struct Verification {
    bool verified = false;
    std::string method;  // exponential_target | exponential_qualitative | polynomial | none
    std::optional<DecayFit> fit;
    std::optional<ExponentialCheck> exponential;
    std::optional<PolynomialCheck> polynomial;
    std::optional<std::string> error;
};

struct ExperimentResult {
    ExperimentConfig config;
    GainReport gain;
    RunResult run;
    Verification verification;
    double wall_seconds = 0.0;
};

/// Fits and verifies a trajectory against the gain report's predicted decay.
inline Verification verify_run(const ExperimentConfig& c, const GainReport& gain, const RunResult& run) {
    Verification v;
    if (run.blew_up) {
        v.method = "none";
        v.error = "run aborted by blow-up";
        return v;
    }
    const Window w{c.window_lo * c.t_end, c.window_hi * c.t_end};
    try {
        if (gain.decay == DecayKind::Polynomial && gain.predicted_rate) {
            v.method = "polynomial";
            const Window pw{std::max(1.0, w.lo), w.hi};
            v.polynomial = verify_polynomial(run.records, *gain.predicted_rate, pw);
            v.verified = v.polynomial->ok;
            v.fit = fit_polynomial(run.records, pw);
        } else if (gain.predicted_rate) {
            v.method = "exponential_target";
            v.exponential = verify_exponential(run.records, *gain.predicted_rate, c.safety, w);
            v.fit = v.exponential->fitted;
            v.verified = v.exponential->ok;
        } else {
            v.method = "exponential_qualitative";
            v.fit = fit_exponential(run.records, w);
            v.verified = v.fit->rate > 0.0 && v.fit->r_squared >= 0.95;
        }
    } catch (const std::exception& e) {
        v.error = e.what();
        v.verified = false;
    }
    return v;
}

/// Validated config in, gain report plus simulated and verified trajectory out.
inline ExperimentResult run_experiment(const ExperimentConfig& c) {
    const auto start = std::chrono::steady_clock::now();
    ExperimentResult r;
    r.config = c;
    r.gain = gain_report_for(c);
    const Grid1D g = build_grid(c);
    r.run = run(build_model(c), build_controller(c), build_profile(c.u0, g, c.amplitude),
                build_profile(c.u1, g, c.u1_amplitude), build_stepper(c, g));
    r.verification = verify_run(c, r.gain, r.run);
    r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

// ---------------------------------------------------------------------------
// Serialization

inline const char* to_string(DecayKind k) { return k == DecayKind::Exponential ? "exponential" : "polynomial"; }

inline nlohmann::json to_json(const GainReport& r) {
    nlohmann::json margins = nlohmann::json::array();
    for (const auto& m : r.margins)
        margins.push_back({{"name", m.name}, {"lhs", m.lhs}, {"rhs", m.rhs}, {"slack", m.slack},
                           {"strict", m.strict}, {"holds", m.holds}});
    nlohmann::json q = nlohmann::json::object();
    for (const auto& [k, v] : r.quantities) q[k] = v;
    return {{"theorem", r.theorem},
            {"satisfied", r.satisfied},
            {"decay", to_string(r.decay)},
            {"predicted_rate", r.predicted_rate ? nlohmann::json(*r.predicted_rate) : nlohmann::json(nullptr)},
            {"margins", margins},
            {"quantities", q},
            {"notes", r.notes}};
}

inline nlohmann::json to_json(const DecayFit& f) {
    return {{"kind", to_string(f.kind)},   {"rate", f.rate},
            {"amplitude", f.amplitude},    {"r_squared", f.r_squared},
            {"window", {f.window.lo, f.window.hi}}, {"used", f.used}};
}

inline nlohmann::json to_json(const Verification& v) {
    nlohmann::json j{{"verified", v.verified}, {"method", v.method}};
    j["fit"] = v.fit ? to_json(*v.fit) : nlohmann::json(nullptr);
    if (v.exponential)
        j["exponential"] = {{"rate_ok", v.exponential->rate_ok},
                            {"envelope_ok", v.exponential->envelope_ok},
                            {"envelope_constant", v.exponential->envelope_constant}};
    if (v.polynomial)
        j["polynomial"] = {{"sup_ratio", v.polynomial->sup_ratio},
                           {"first_quarter_sup", v.polynomial->first_quarter_sup},
                           {"last_quarter_sup", v.polynomial->last_quarter_sup}};
    if (v.error) j["error"] = *v.error;
    return j;
}

inline nlohmann::json to_json(const ExperimentResult& r) {
    nlohmann::json cfg;
    to_json(cfg, r.config);
    nlohmann::json blow = nullptr;
    if (r.run.blew_up) blow = {{"time", r.run.blowup_time}, {"steps", r.run.steps}};
    return {{"gain", to_json(r.gain)},
            {"verification", to_json(r.verification)},
            {"run", {{"dt", r.run.dt}, {"steps", r.run.steps}, {"records", r.run.records.size()}}},
            {"blow_up", blow},
            {"wall_seconds", r.wall_seconds},
            {"config", cfg}};
}

inline nlohmann::json to_json(const InequalityReport& r) {
    nlohmann::json j{{"name", r.name},
                     {"statement", r.statement},
                     {"samples", r.samples},
                     {"violations", r.violations},
                     {"worst_ratio", r.worst_ratio},
                     {"empirical_best_constant", r.empirical_best_constant},
                     {"stated_constant", r.stated_constant},
                     {"informational", r.informational}};
    if (r.injected) j["injected"] = {{"lhs", r.injected->first}, {"rhs", r.injected->second}};
    return j;
}

inline const char* kTrajectoryHeader = "t,kinetic,grad,quadratic,lp,controller,total,stab_norm,lyapunov";

inline std::string format_real(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

/// One header line and one row per record; an empty last field when no functional is tracked.
inline void write_trajectory_csv(std::ostream& out, const std::vector<EnergyRecord>& records) {
    out << kTrajectoryHeader << '\n';
    for (const auto& r : records) {
        out << format_real(r.t) << ',' << format_real(r.kinetic) << ',' << format_real(r.grad) << ','
            << format_real(r.quadratic) << ',' << format_real(r.lp) << ',' << format_real(r.controller) << ','
            << format_real(r.total) << ',' << format_real(r.stab_norm) << ',';
        if (r.lyapunov) out << format_real(*r.lyapunov);
        out << '\n';
    }
}

}  // namespace wavestab
