#pragma once

// Flat key=value run configuration. Lines starting with '#' are comments.
// Output files written by the CLI begin with a header block of the form
//
//   # segnet-output version=... command=...
//   # key=value
//   ...
//
// and can be passed back as --config to reproduce the run.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "segnet/calibration.hpp"
#include "segnet/error.hpp"
#include "segnet/model.hpp"

namespace segnet {

inline constexpr const char* kToolVersion = "1.0.0";
inline constexpr const char* kOutputMarker = "# segnet-output";

class ConfigError : public Error {
public:
    using Error::Error;
};

enum class OutputFormat { Csv, Json };

/// Shortest text that round-trips: 17 significant digits.
inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct RunConfig {
    CalibrationTargets targets;
    // overrides of calibrated quantities
    std::optional<double> c0;
    std::optional<double> c1_pk;
    std::optional<double> c1_lambda;
    std::optional<double> theta;
    double alpha = 0.5;
    ExplicitSplit split;

    int grid = 200;
    double tol = 1e-9;
    std::uint64_t seed = 1;

    // sweep
    double alpha_min = 0.5;
    double alpha_max = 0.95;
    double alpha_step = 0.01;
    std::vector<double> fig1_alphas = {0.5, 0.55, 0.6, 0.65, 0.7, 0.8};
    double mu_step = 0.01;

    // sensitivity
    double rel_step = 1e-2;

    // dynamics
    double k = 1.0;
    double dyn_step = 0.5;
    double dyn_horizon = 5000.0;

    // monte carlo
    long n = 5000;
    double mc_mu_R = 1.0;
    double mc_mu_G = 0.0;
    int replications = 20;
    int probes = 500;
    double burn_in = 200.0;
    double horizon = 1000.0;

    OutputFormat format = OutputFormat::Csv;

    /// Product-form parameters after applying overrides to the calibration.
    ModelParams model_params() const {
        const ModelParams cal = calibrate(targets);
        return ModelParams::from_products(c0.value_or(cal.c0), c1_pk.value_or(cal.c1_pk()),
                                          c1_lambda.value_or(cal.c1_lambda()),
                                          theta.value_or(cal.theta), alpha, targets.rho);
    }

    /// Explicit-probability parameters for network sampling: c1 = c1(p+kappa) / (p+kappa).
    ModelParams split_params() const {
        const ModelParams m = model_params();
        const double pk = split.p + split.kappa;
        if (!(pk > 0.0)) throw InvalidSplit("p + kappa must be positive");
        const double c1 = m.c1_pk() / pk;
        if (std::abs(c1 * split.lambda - m.c1_lambda()) > 1e-9 * m.c1_lambda())
            throw InvalidSplit("split lambda / (p + kappa) does not match c1*lambda / c1(p+kappa)");
        try {
            return ModelParams::from_split(split.p, split.kappa, split.lambda, m.c0, c1, m.theta,
                                           m.alpha, m.rho);
        } catch (const InvalidParams& e) {
            throw InvalidSplit(e.what());
        }
    }
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline double parse_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ConfigError("invalid number for '" + key + "': '" + v + "'");
    }
}

inline long parse_long(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const long d = std::stol(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ConfigError("invalid integer for '" + key + "': '" + v + "'");
    }
}

struct Field {
    std::string key;
    std::function<void(RunConfig&, const std::string&)> set;
    std::function<std::optional<std::string>(const RunConfig&)> get;
};

inline Field num(std::string key, double RunConfig::*member) {
    return {key,
            [member, key](RunConfig& c, const std::string& v) { c.*member = parse_double(key, v); },
            [member](const RunConfig& c) { return std::optional(format_double(c.*member)); }};
}

inline Field target(std::string key, double CalibrationTargets::*member) {
    return {key,
            [member, key](RunConfig& c, const std::string& v) {
                c.targets.*member = parse_double(key, v);
            },
            [member](const RunConfig& c) { return std::optional(format_double(c.targets.*member)); }};
}

inline Field split_field(std::string key, double ExplicitSplit::*member) {
    return {key,
            [member, key](RunConfig& c, const std::string& v) { c.split.*member = parse_double(key, v); },
            [member](const RunConfig& c) { return std::optional(format_double(c.split.*member)); }};
}

inline Field opt_num(std::string key, std::optional<double> RunConfig::*member) {
    return {key,
            [member, key](RunConfig& c, const std::string& v) { c.*member = parse_double(key, v); },
            [member](const RunConfig& c) -> std::optional<std::string> {
                if (!(c.*member)) return std::nullopt;
                return format_double(*(c.*member));
            }};
}

template <class Int>
Field integer(std::string key, Int RunConfig::*member) {
    return {key,
            [member, key](RunConfig& c, const std::string& v) {
                c.*member = static_cast<Int>(parse_long(key, v));
            },
            [member](const RunConfig& c) { return std::optional(std::to_string(c.*member)); }};
}

inline const std::vector<Field>& fields() {
    static const std::vector<Field> f = [] {
        std::vector<Field> v;
        v.push_back(target("informal_share", &CalibrationTargets::informal_share));
        v.push_back(target("homophily_ratio", &CalibrationTargets::homophily_ratio));
        v.push_back(target("target_employment", &CalibrationTargets::target_employment));
        v.push_back(target("target_income", &CalibrationTargets::target_income));
        v.push_back(target("rho", &CalibrationTargets::rho));
        v.push_back(opt_num("c0", &RunConfig::c0));
        v.push_back(opt_num("c1_pk", &RunConfig::c1_pk));
        v.push_back(opt_num("c1_lambda", &RunConfig::c1_lambda));
        v.push_back(opt_num("theta", &RunConfig::theta));
        v.push_back(num("alpha", &RunConfig::alpha));
        v.push_back(split_field("p", &ExplicitSplit::p));
        v.push_back(split_field("kappa", &ExplicitSplit::kappa));
        v.push_back(split_field("lambda", &ExplicitSplit::lambda));
        v.push_back(integer("grid", &RunConfig::grid));
        v.push_back(num("tol", &RunConfig::tol));
        v.push_back({"seed",
                     [](RunConfig& c, const std::string& s) {
                         try {
                             std::size_t pos = 0;
                             c.seed = std::stoull(s, &pos);
                             if (pos != s.size()) throw std::invalid_argument(s);
                         } catch (const std::exception&) {
                             throw ConfigError("invalid seed: '" + s + "'");
                         }
                     },
                     [](const RunConfig& c) { return std::optional(std::to_string(c.seed)); }});
        v.push_back(num("alpha_min", &RunConfig::alpha_min));
        v.push_back(num("alpha_max", &RunConfig::alpha_max));
        v.push_back(num("alpha_step", &RunConfig::alpha_step));
        v.push_back({"fig1_alphas",
                     [](RunConfig& c, const std::string& s) {
                         c.fig1_alphas.clear();
                         std::stringstream ss(s);
                         std::string item;
                         while (std::getline(ss, item, ','))
                             c.fig1_alphas.push_back(parse_double("fig1_alphas", trim(item)));
                         if (c.fig1_alphas.empty()) throw ConfigError("fig1_alphas is empty");
                     },
                     [](const RunConfig& c) {
                         std::string out;
                         for (std::size_t i = 0; i < c.fig1_alphas.size(); ++i) {
                             if (i) out += ",";
                             out += format_double(c.fig1_alphas[i]);
                         }
                         return std::optional(out);
                     }});
        v.push_back(num("mu_step", &RunConfig::mu_step));
        v.push_back(num("rel_step", &RunConfig::rel_step));
        v.push_back(num("k", &RunConfig::k));
        v.push_back(num("dyn_step", &RunConfig::dyn_step));
        v.push_back(num("dyn_horizon", &RunConfig::dyn_horizon));
        v.push_back(integer("n", &RunConfig::n));
        v.push_back(num("mc_mu_R", &RunConfig::mc_mu_R));
        v.push_back(num("mc_mu_G", &RunConfig::mc_mu_G));
        v.push_back(integer("replications", &RunConfig::replications));
        v.push_back(integer("probes", &RunConfig::probes));
        v.push_back(num("burn_in", &RunConfig::burn_in));
        v.push_back(num("horizon", &RunConfig::horizon));
        v.push_back({"format",
                     [](RunConfig& c, const std::string& s) {
                         if (s == "csv") c.format = OutputFormat::Csv;
                         else if (s == "json") c.format = OutputFormat::Json;
                         else throw ConfigError("format must be csv or json");
                     },
                     [](const RunConfig& c) {
                         return std::optional<std::string>(c.format == OutputFormat::Csv ? "csv" : "json");
                     }});
        return v;
    }();
    return f;
}

} // namespace detail

/// Sets one key; unknown keys and malformed values raise ConfigError.
inline void set_config_value(RunConfig& cfg, const std::string& key, const std::string& value) {
    for (const auto& f : detail::fields()) {
        if (f.key == key) {
            f.set(cfg, value);
            return;
        }
    }
    throw ConfigError("unknown configuration key '" + key + "'");
}

/// Parses config text. If the text is a previous output file, only its header block is read.
inline RunConfig parse_config(const std::string& text, RunConfig cfg = {}) {
    if (const auto first = text.find_first_not_of(" \t\r\n"); first != std::string::npos && text[first] == '{') {
        // JSON output of a previous run: its "config" object holds the resolved entries
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(text);
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError(std::string("malformed JSON: ") + e.what());
        }
        if (!j.is_object() || !j.contains("config") || !j["config"].is_object())
            throw ConfigError("JSON config needs a \"config\" object");
        for (const auto& [key, value] : j["config"].items()) {
            if (!value.is_string()) throw ConfigError("JSON config value for '" + key + "' must be a string");
            set_config_value(cfg, key, value.get<std::string>());
        }
        return cfg;
    }
    std::istringstream in(text);
    std::string line;
    const bool is_output = text.rfind(kOutputMarker, 0) == 0;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string body = detail::trim(line);
        if (is_output) {
            if (lineno == 1) continue;
            if (body.empty() || body[0] != '#') break;
            body = detail::trim(body.substr(1));
        } else {
            if (body.empty() || body[0] == '#') continue;
        }
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected key=value");
        const std::string key = detail::trim(body.substr(0, eq));
        const std::string value = detail::trim(body.substr(eq + 1));
        try {
            set_config_value(cfg, key, value);
        } catch (const ConfigError& e) {
            throw ConfigError("line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return cfg;
}

inline RunConfig load_config(const std::string& path, RunConfig cfg = {}) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot read config file '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str(), std::move(cfg));
}

/// Resolved key/value pairs in canonical order. Calibrated quantities that
/// were not overridden are filled in, so the echo pins them exactly.
inline std::vector<std::pair<std::string, std::string>> resolved_entries(const RunConfig& cfg) {
    RunConfig r = cfg;
    const ModelParams m = cfg.model_params();
    r.c0 = m.c0;
    r.c1_pk = m.c1_pk();
    r.c1_lambda = m.c1_lambda();
    r.theta = m.theta;
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& f : detail::fields())
        if (auto v = f.get(r)) out.emplace_back(f.key, *v);
    return out;
}

/// Range checks that do not depend on the subcommand.
inline void validate_config(const RunConfig& c) {
    try {
        c.targets.validate();
        (void)c.model_params();
    } catch (const Error& e) {
        throw ConfigError(e.what());
    }
    if (c.grid < 1) throw ConfigError("grid must be positive");
    if (!(c.tol > 0.0)) throw ConfigError("tol must be positive");
    if (!(c.alpha_step > 0.0) || !(c.alpha_min <= c.alpha_max))
        throw ConfigError("alpha sweep range is empty");
    if (!(c.alpha_min >= 0.5 && c.alpha_max < 1.0))
        throw ConfigError("alpha sweep must stay inside [0.5, 1) (A is the good job)");
    if (!(c.mu_step > 0.0 && c.mu_step <= 0.5)) throw ConfigError("mu_step must lie in (0, 0.5]");
    if (!(c.k > 0.0) || !(c.dyn_step > 0.0) || !(c.dyn_horizon > 0.0))
        throw ConfigError("dynamics settings must be positive");
    if (c.n < 100 || c.n % 2 != 0) throw ConfigError("n must be even and at least 100");
    if (c.replications < 1) throw ConfigError("replications must be >= 1");
    if (c.probes < 0) throw ConfigError("probes must be >= 0");
    if (!(c.burn_in >= 0.0) || !(c.horizon > 0.0)) throw ConfigError("invalid mc horizons");
    if (!(c.mc_mu_R >= 0.0 && c.mc_mu_R <= 1.0 && c.mc_mu_G >= 0.0 && c.mc_mu_G <= 1.0))
        throw ConfigError("mc profile must lie in [0,1]^2");
}

} // namespace segnet
