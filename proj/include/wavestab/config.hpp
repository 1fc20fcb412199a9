#pragma once

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "controllers.hpp"
#include "grid.hpp"
#include "integrator.hpp"
#include "models.hpp"
#include "random_fields.hpp"
#include "spectral.hpp"

namespace wavestab {

/// Parse or validation failure; line is 0 when no source line applies.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string source, int line, const std::string& msg)
        : std::runtime_error((line > 0 ? source + ":" + std::to_string(line) + ": " : source + ": ") + msg),
          line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

/**
 * Flat INI description of one experiment.
 *
 *   [model]      family, nu, a, b, m, p, nonlinearity (power|zero), bc, L, n_cells
 *   [controller] variant (none|volume|fourier|nodal|subdomain), N, mu,
 *                omega_lo, omega_hi, obs_points, act_points
 *   [initial]    u0, u1 (profiles), amplitude, u1_amplitude
 *   [time]       dt (0: default), t_end, record_every (0: auto), scheme (imex_cn|rk4)
 *   [analysis]   window_lo, window_hi (fractions of t_end), safety
 *
 * Reals accept products and quotients of numbers and `pi`, e.g. `pi`, `pi/2`, `0.5*pi`.
 * Profiles: zero | constant(c) | mode k | bump(center,width) | random(seed,degree).
 */
struct ExperimentConfig {
    // model
    std::string family = "damped_wave";
    double nu = 1.0;
    double a = 0.0;
    double b = 1.0;
    double m = 3.0;
    double p = 4.0;
    std::string nonlinearity = "power";
    std::string bc = "dirichlet";
    double length = std::numbers::pi;
    int n_cells = 128;
    // controller
    std::string variant = "none";
    int n = 1;
    double mu = 0.0;
    double omega_lo = 0.0;
    double omega_hi = 0.0;
    std::vector<double> obs_points;
    std::vector<double> act_points;
    // initial data
    std::string u0 = "mode 1";
    std::string u1 = "zero";
    double amplitude = 1.0;
    double u1_amplitude = 1.0;
    // time
    double dt = 0.0;
    double t_end = 20.0;
    int record_every = 0;
    std::string scheme = "imex_cn";
    // analysis
    double window_lo = 0.2;
    double window_hi = 0.9;
    double safety = 0.8;

    bool operator==(const ExperimentConfig&) const = default;
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

inline std::string lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

inline double parse_factor(const std::string& tok) {
    const std::string t = lower(trim(tok));
    if (t == "pi") return std::numbers::pi;
    if (t.empty()) throw std::invalid_argument("empty number");
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (end != t.c_str() + t.size() || !std::isfinite(v)) throw std::invalid_argument("not a number: '" + tok + "'");
    return v;
}

}  // namespace detail

/// Number, `pi`, or a chain of them joined by `*` and `/`.
inline double parse_real(const std::string& text) {
    const std::string s = detail::trim(text);
    double value = 1.0;
    char op = '*';
    std::size_t start = 0;
    // a leading sign belongs to the first factor; exponents like 1e-3 contain no * or /
    for (std::size_t i = 0; i <= s.size(); ++i) {
        if (i == s.size() || s[i] == '*' || s[i] == '/') {
            const double f = detail::parse_factor(s.substr(start, i - start));
            value = op == '*' ? value * f : value / f;
            if (i < s.size()) op = s[i];
            start = i + 1;
        }
    }
    return value;
}

inline int parse_int(const std::string& text) {
    const std::string t = detail::trim(text);
    char* end = nullptr;
    const long v = std::strtol(t.c_str(), &end, 10);
    if (t.empty() || end != t.c_str() + t.size()) throw std::invalid_argument("not an integer: '" + text + "'");
    return static_cast<int>(v);
}

inline std::vector<double> parse_real_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (detail::trim(item).empty()) continue;
        out.push_back(parse_real(item));
    }
    return out;
}

/// Parsed text with the source line of every key, for anchoring later errors.
struct ParsedConfig {
    ExperimentConfig config;
    std::map<std::string, int> lines;  // "section.key" -> line
    std::string source;

    int line_of(const std::string& key) const {
        auto it = lines.find(key);
        return it == lines.end() ? 0 : it->second;
    }
};

inline ParsedConfig parse_config(const std::string& text, const std::string& source = "<config>") {
    ParsedConfig out;
    out.source = source;
    ExperimentConfig& c = out.config;
    std::istringstream in(text);
    std::string raw;
    std::string section;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();
        std::string line = detail::trim(raw);
        if (line.empty() || line[0] == '#' || line[0] == ';') continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError(source, line_no, "malformed section header");
            section = detail::lower(detail::trim(line.substr(1, line.size() - 2)));
            if (section != "model" && section != "controller" && section != "initial" && section != "time" &&
                section != "analysis")
                throw ConfigError(source, line_no, "unknown section [" + section + "]");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(source, line_no, "expected key = value");
        if (section.empty()) throw ConfigError(source, line_no, "key outside of any section");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        const std::string full = section + "." + key;
        if (out.lines.count(full)) throw ConfigError(source, line_no, "duplicate key '" + key + "'");
        out.lines[full] = line_no;

        try {
            const std::string lv = detail::lower(value);
            if (full == "model.family") c.family = lv;
            else if (full == "model.nu") c.nu = parse_real(value);
            else if (full == "model.a") c.a = parse_real(value);
            else if (full == "model.b") c.b = parse_real(value);
            else if (full == "model.m") c.m = parse_real(value);
            else if (full == "model.p") c.p = parse_real(value);
            else if (full == "model.nonlinearity") c.nonlinearity = lv;
            else if (full == "model.bc") c.bc = lv;
            else if (full == "model.L") c.length = parse_real(value);
            else if (full == "model.n_cells") c.n_cells = parse_int(value);
            else if (full == "controller.variant") c.variant = lv;
            else if (full == "controller.N") c.n = parse_int(value);
            else if (full == "controller.mu") c.mu = parse_real(value);
            else if (full == "controller.omega_lo") c.omega_lo = parse_real(value);
            else if (full == "controller.omega_hi") c.omega_hi = parse_real(value);
            else if (full == "controller.obs_points") c.obs_points = parse_real_list(value);
            else if (full == "controller.act_points") c.act_points = parse_real_list(value);
            else if (full == "initial.u0") c.u0 = value;
            else if (full == "initial.u1") c.u1 = value;
            else if (full == "initial.amplitude") c.amplitude = parse_real(value);
            else if (full == "initial.u1_amplitude") c.u1_amplitude = parse_real(value);
            else if (full == "time.dt") c.dt = parse_real(value);
            else if (full == "time.t_end") c.t_end = parse_real(value);
            else if (full == "time.record_every") c.record_every = parse_int(value);
            else if (full == "time.scheme") c.scheme = lv;
            else if (full == "analysis.window_lo") c.window_lo = parse_real(value);
            else if (full == "analysis.window_hi") c.window_hi = parse_real(value);
            else if (full == "analysis.safety") c.safety = parse_real(value);
            else throw ConfigError(source, line_no, "unknown key '" + key + "' in [" + section + "]");
        } catch (const std::invalid_argument& e) {
            throw ConfigError(source, line_no, key + ": " + e.what());
        }
    }
    return out;
}

inline ParsedConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path, 0, "cannot open config file");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path);
}

// ---------------------------------------------------------------------------
// Building library objects

inline Family parse_family(const std::string& s) {
    if (s == "damped_wave") return Family::DampedWave;
    if (s == "nonlinear_damping_wave") return Family::NonlinearDampingWave;
    if (s == "strongly_damped_wave") return Family::StronglyDampedWave;
    throw std::invalid_argument("unknown family '" + s + "'");
}

inline Boundary parse_bc(const std::string& s) {
    if (s == "dirichlet") return Boundary::Dirichlet;
    if (s == "neumann") return Boundary::Neumann;
    throw std::invalid_argument("unknown bc '" + s + "'");
}

inline Scheme parse_scheme(const std::string& s) {
    if (s == "imex_cn") return Scheme::ImexCN;
    if (s == "rk4") return Scheme::ExplicitRK4;
    throw std::invalid_argument("unknown scheme '" + s + "'");
}

inline Grid1D build_grid(const ExperimentConfig& c) { return Grid1D(c.length, c.n_cells, parse_bc(c.bc)); }

inline ModelSpec build_model(const ExperimentConfig& c) {
    ModelSpec m;
    m.family = parse_family(c.family);
    m.nu = c.nu;
    m.a = c.a;
    m.b = c.b;
    m.m = c.m;
    m.bc = parse_bc(c.bc);
    if (c.nonlinearity == "power")
        m.nonlinearity = Nonlinearity::power_law(c.p);
    else if (c.nonlinearity == "zero")
        m.nonlinearity = Nonlinearity::zero();
    else
        throw std::invalid_argument("unknown nonlinearity '" + c.nonlinearity + "'");
    return m;
}

inline ControllerSpec build_controller(const ExperimentConfig& c) {
    if (c.variant == "none") return NoControl{};
    if (c.variant == "volume") return VolumeElements{c.n, c.mu};
    if (c.variant == "fourier") return FourierModes{c.n, c.mu};
    if (c.variant == "nodal") return Nodal{c.n, c.mu, c.obs_points, c.act_points};
    if (c.variant == "subdomain") return SubdomainControl{Subdomain{c.omega_lo, c.omega_hi}, c.mu};
    throw std::invalid_argument("unknown controller variant '" + c.variant + "'");
}

/// Samples an initial profile (see ExperimentConfig) on g.
inline Field build_profile(const std::string& spec, const Grid1D& g, double scale) {
    const std::string s = detail::lower(detail::trim(spec));
    const double length = g.length();
    auto args = [&](const std::string& name) {
        const auto open = s.find('('), close = s.rfind(')');
        if (open == std::string::npos || close == std::string::npos || close < open)
            throw std::invalid_argument("malformed profile '" + spec + "'; expected " + name + "(...)");
        return parse_real_list(s.substr(open + 1, close - open - 1));
    };
    Field f(g);
    if (s == "zero") {
        return f;
    } else if (s.rfind("constant", 0) == 0) {
        const auto v = args("constant");
        if (v.size() != 1) throw std::invalid_argument("constant(value) takes one argument");
        f = Field::sample(g, [&](double) { return v[0]; });
    } else if (s.rfind("mode", 0) == 0) {
        const int k = parse_int(s.substr(4));
        if (g.bc() == Boundary::Dirichlet) {
            if (k < 1) throw std::invalid_argument("Dirichlet modes start at 1");
            f = EigenBasis(length, k).sample(k, g);
        } else {
            if (k < 0) throw std::invalid_argument("Neumann modes start at 0");
            const double norm = k == 0 ? std::sqrt(1.0 / length) : std::sqrt(2.0 / length);
            f = Field::sample(g, [&](double x) { return norm * std::cos(k * std::numbers::pi * x / length); });
        }
    } else if (s.rfind("bump", 0) == 0) {
        const auto v = args("bump");
        if (v.size() != 2 || !(v[1] > 0.0)) throw std::invalid_argument("bump(center,width) needs a positive width");
        const double c = v[0], w = v[1];
        f = Field::sample(g, [&](double x) {
            const double r = (x - c) / w;
            return std::abs(r) < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - r * r)) : 0.0;
        });
    } else if (s.rfind("random", 0) == 0) {
        const auto v = args("random");
        if (v.size() != 2 || v[1] < 1) throw std::invalid_argument("random(seed,degree) needs degree >= 1");
        auto rng = sample_stream(static_cast<std::uint64_t>(v[0]), 0);
        const int degree = static_cast<int>(v[1]);
        const auto poly = g.bc() == Boundary::Dirichlet ? random_sine_series(rng, length, degree)
                                                        : random_cosine_series(rng, length, degree);
        f = poly.sample(g);
    } else {
        throw std::invalid_argument("unknown profile '" + spec + "'");
    }
    f *= scale;
    return f;
}

inline StepperConfig build_stepper(const ExperimentConfig& c, const Grid1D& g) {
    StepperConfig s;
    s.dt = c.dt > 0.0 ? c.dt : StepperConfig::default_dt(g);
    if (c.t_end > 0.0) s.dt = std::min(s.dt, c.t_end);
    s.scheme = parse_scheme(c.scheme);
    s.t_end = c.t_end;
    s.record_every = c.record_every;
    return s;
}

/// Cross-checks the configuration; throws ConfigError anchored at the offending key.
inline void validate(const ParsedConfig& pc) {
    const ExperimentConfig& c = pc.config;
    auto fail = [&](const std::string& key, const std::string& msg) {
        throw ConfigError(pc.source, pc.line_of(key), msg);
    };
    auto guard = [&](const std::string& key, auto&& fn) {
        try {
            fn();
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception& e) {
            fail(key, e.what());
        }
    };
    guard("model.family", [&] { parse_family(c.family); });
    guard("model.bc", [&] { parse_bc(c.bc); });
    guard("time.scheme", [&] { parse_scheme(c.scheme); });
    guard("model.L", [&] { build_grid(c); });
    guard("model.nonlinearity", [&] { build_model(c); });
    guard("model.family", [&] { build_model(c).validate(); });
    guard("controller.variant", [&] { build_controller(c); });
    if (c.variant != "none" && c.variant != "subdomain" && c.n < 1) fail("controller.N", "N must be >= 1");
    if (!(c.mu >= 0.0)) fail("controller.mu", "mu must be nonnegative");

    const Grid1D g = build_grid(c);
    const bool neumann = g.bc() == Boundary::Neumann;
    if (c.variant == "volume" && !neumann) fail("controller.variant", "volume-element control needs bc = neumann");
    if ((c.variant == "fourier" || c.variant == "nodal" || c.variant == "subdomain") && neumann)
        fail("controller.variant", c.variant + " control needs bc = dirichlet");
    if (c.variant == "subdomain") guard("controller.omega_lo", [&] { Subdomain{c.omega_lo, c.omega_hi}.validate(c.length); });
    if (c.variant == "nodal") guard("controller.obs_points", [&] {
        detail::nodal_points(Nodal{c.n, c.mu, c.obs_points, c.act_points}, c.length);
    });
    guard("initial.u0", [&] { build_profile(c.u0, g, c.amplitude); });
    guard("initial.u1", [&] { build_profile(c.u1, g, c.u1_amplitude); });
    if (!(c.t_end >= 0.0)) fail("time.t_end", "t_end must be nonnegative");
    if (!(c.dt >= 0.0)) fail("time.dt", "dt must be nonnegative (0 selects the default)");
    if (c.record_every < 0) fail("time.record_every", "record_every must be nonnegative");
    if (!(0.0 <= c.window_lo && c.window_lo < c.window_hi && c.window_hi <= 1.0))
        fail("analysis.window_lo", "need 0 <= window_lo < window_hi <= 1");
    if (!(c.safety > 0.0 && c.safety <= 1.0)) fail("analysis.safety", "safety must lie in (0, 1]");
    guard("time.dt", [&] {
        const auto s = build_stepper(c, g);
        if (c.t_end > 0.0) Stepper(build_model(c), build_controller(c), g, s.dt, s.scheme);
    });
}

// ---------------------------------------------------------------------------
// JSON echo

inline void to_json(nlohmann::json& j, const ExperimentConfig& c) {
    j = nlohmann::json{
        {"model",
         {{"family", c.family}, {"nu", c.nu}, {"a", c.a}, {"b", c.b}, {"m", c.m}, {"p", c.p},
          {"nonlinearity", c.nonlinearity}, {"bc", c.bc}, {"L", c.length}, {"n_cells", c.n_cells}}},
        {"controller",
         {{"variant", c.variant}, {"N", c.n}, {"mu", c.mu}, {"omega_lo", c.omega_lo}, {"omega_hi", c.omega_hi},
          {"obs_points", c.obs_points}, {"act_points", c.act_points}}},
        {"initial", {{"u0", c.u0}, {"u1", c.u1}, {"amplitude", c.amplitude}, {"u1_amplitude", c.u1_amplitude}}},
        {"time", {{"dt", c.dt}, {"t_end", c.t_end}, {"record_every", c.record_every}, {"scheme", c.scheme}}},
        {"analysis", {{"window_lo", c.window_lo}, {"window_hi", c.window_hi}, {"safety", c.safety}}},
    };
}

inline void from_json(const nlohmann::json& j, ExperimentConfig& c) {
    const auto& mo = j.at("model");
    mo.at("family").get_to(c.family);
    mo.at("nu").get_to(c.nu);
    mo.at("a").get_to(c.a);
    mo.at("b").get_to(c.b);
    mo.at("m").get_to(c.m);
    mo.at("p").get_to(c.p);
    mo.at("nonlinearity").get_to(c.nonlinearity);
    mo.at("bc").get_to(c.bc);
    mo.at("L").get_to(c.length);
    mo.at("n_cells").get_to(c.n_cells);
    const auto& co = j.at("controller");
    co.at("variant").get_to(c.variant);
    co.at("N").get_to(c.n);
    co.at("mu").get_to(c.mu);
    co.at("omega_lo").get_to(c.omega_lo);
    co.at("omega_hi").get_to(c.omega_hi);
    co.at("obs_points").get_to(c.obs_points);
    co.at("act_points").get_to(c.act_points);
    const auto& in = j.at("initial");
    in.at("u0").get_to(c.u0);
    in.at("u1").get_to(c.u1);
    in.at("amplitude").get_to(c.amplitude);
    in.at("u1_amplitude").get_to(c.u1_amplitude);
    const auto& ti = j.at("time");
    ti.at("dt").get_to(c.dt);
    ti.at("t_end").get_to(c.t_end);
    ti.at("record_every").get_to(c.record_every);
    ti.at("scheme").get_to(c.scheme);
    const auto& an = j.at("analysis");
    an.at("window_lo").get_to(c.window_lo);
    an.at("window_hi").get_to(c.window_hi);
    an.at("safety").get_to(c.safety);
}

}  // namespace wavestab
