#pragma once

// Subcommands of the segnet tool. Kept in a header so tests can drive
// run_cli() in-process.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "segnet/calibration.hpp"
#include "segnet/config.hpp"
#include "segnet/equilibrium.hpp"
#include "segnet/netmc.hpp"
#include "segnet/sensitivity.hpp"
#include "segnet/welfare.hpp"

namespace segnet::cli {

enum ExitCode : int { kOk = 0, kConfigError = 2, kSolverError = 3, kIoError = 4 };

class IoError : public Error {
public:
    using Error::Error;
};

using Cell = std::variant<double, long, std::string>;

struct Table {
    std::string name;  ///< file stem
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

inline std::string cell_text(const Cell& c) {
    if (const auto* d = std::get_if<double>(&c)) return format_double(*d);
    if (const auto* l = std::get_if<long>(&c)) return std::to_string(*l);
    return std::get<std::string>(c);
}

inline std::string header_block(const std::string& command, const RunConfig& cfg) {
    std::string out = std::string(kOutputMarker) + " version=" + kToolVersion + " command=" + command + "\n";
    for (const auto& [k, v] : resolved_entries(cfg)) out += "# " + k + "=" + v + "\n";
    return out;
}

inline std::string render_csv(const Table& t, const std::string& header) {
    std::string out = header;
    for (std::size_t i = 0; i < t.columns.size(); ++i) out += (i ? "," : "") + t.columns[i];
    out += "\n";
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + cell_text(row[i]);
        out += "\n";
    }
    return out;
}

inline std::string render_json(const Table& t, const std::string& command, const RunConfig& cfg) {
    nlohmann::ordered_json j;
    j["tool"] = "segnet";
    j["version"] = kToolVersion;
    j["command"] = command;
    nlohmann::ordered_json conf = nlohmann::ordered_json::object();
    for (const auto& [k, v] : resolved_entries(cfg)) conf[k] = v;
    j["config"] = conf;
    j["columns"] = t.columns;
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& row : t.rows) {
        nlohmann::ordered_json r = nlohmann::ordered_json::array();
        for (const auto& c : row) {
            if (const auto* d = std::get_if<double>(&c)) {
                if (std::isfinite(*d)) r.push_back(*d);
                else r.push_back(nullptr);
            } else if (const auto* l = std::get_if<long>(&c)) {
                r.push_back(*l);
            } else {
                r.push_back(std::get<std::string>(c));
            }
        }
        rows.push_back(r);
    }
    j["rows"] = rows;
    return j.dump(2) + "\n";
}

inline std::filesystem::path prepare_out_dir(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec || !std::filesystem::is_directory(dir)) throw IoError("cannot create output directory '" + dir + "'");
    const auto probe = std::filesystem::path(dir) / ".segnet-write-test";
    {
        std::ofstream f(probe);
        if (!f) throw IoError("output directory '" + dir + "' is not writable");
    }
    std::filesystem::remove(probe, ec);
    return dir;
}

inline std::vector<std::filesystem::path> write_tables(const std::vector<Table>& tables,
                                                       const std::string& command, const RunConfig& cfg,
                                                       const std::filesystem::path& dir) {
    std::vector<std::filesystem::path> written;
    for (const auto& t : tables) {
        const bool json = cfg.format == OutputFormat::Json;
        const auto path = dir / (t.name + (json ? ".json" : ".csv"));
        const std::string body = json ? render_json(t, command, cfg) : render_csv(t, header_block(command, cfg));
        std::ofstream f(path, std::ios::binary);
        if (!f) throw IoError("cannot open '" + path.string() + "' for writing");
        f << body;
        if (!f) throw IoError("write failed for '" + path.string() + "'");
        written.push_back(path);
    }
    return written;
}

inline std::vector<double> alpha_grid(const RunConfig& c) {
    std::vector<double> out;
    const long steps = std::lround((c.alpha_max - c.alpha_min) / c.alpha_step);
    for (long i = 0; i <= steps; ++i) {
        const double a = c.alpha_min + static_cast<double>(i) * c.alpha_step;
        if (a <= c.alpha_max + 1e-12) out.push_back(a);
    }
    return out;
}

inline ModelParams with_alpha(ModelParams m, double alpha) {
    m.alpha = alpha;
    m.validate();
    return m;
}

// --- commands ---------------------------------------------------------------

inline const char* kEquilibriaColumns =
    "mu_R,mu_G,kind,satisfies_conditions,stability,J_RR,J_RG,J_GR,J_GG,det_jacobian,"
    "s_AR,s_AG,s_BR,s_BG,L_A,L_B,w_A,w_B,Pi_AR,Pi_AG,Pi_BR,Pi_BG,dPi_R,dPi_G";

inline std::vector<Table> cmd_equilibria(const RunConfig& cfg) {
    const Model econ(cfg.model_params());
    Table t{"equilibria", {}, {}};
    std::stringstream ss(kEquilibriaColumns);
    for (std::string col; std::getline(ss, col, ',');) t.columns.push_back(col);
    for (const auto& r : enumerate_equilibria(econ, cfg.grid, cfg.tol)) {
        const MarketState& m = r.market;
        t.rows.push_back({r.profile.mu_R(), r.profile.mu_G(), to_string(r.kind),
                          std::string(r.satisfies_conditions ? "true" : "false"), to_string(r.stable),
                          r.jacobian.d[0][0], r.jacobian.d[0][1], r.jacobian.d[1][0], r.jacobian.d[1][1],
                          r.det_jacobian, m.s_AR, m.s_AG, m.s_BR, m.s_BG, m.L_A, m.L_B, m.w_A, m.w_B,
                          m.Pi_AR, m.Pi_AG, m.Pi_BR, m.Pi_BG, m.dPi_R, m.dPi_G});
    }
    return {t};
}

inline std::vector<Table> cmd_sweep(const RunConfig& cfg) {
    const ModelParams base = cfg.model_params();

    Table fig1{"fig1", {"alpha", "mu_G", "dPi_G"}, {}};
    for (double a : cfg.fig1_alphas) {
        if (!(a > 0.0 && a < 1.0)) throw ConfigError("fig1_alphas must lie in (0,1)");
        const Model econ(with_alpha(base, a));
        const long steps = std::lround(1.0 / cfg.mu_step);
        for (long i = 0; i < steps; ++i) {
            const double mg = static_cast<double>(i) / static_cast<double>(steps);
            fig1.rows.push_back({a, mg, econ.payoff_gaps({1.0, mg}).G});
        }
    }

    Table fig2{"fig2", {"alpha", "regime", "mu_star", "w_A", "w_B", "wage_gap"}, {}};
    Table fig3{"fig3", {"alpha", "mu_star", "s_AR", "s_BR", "s_AG", "s_BG"}, {}};
    Table fig4{"fig4", {"alpha", "mu_star", "mu_S", "W_segregated", "W_integrated", "I"}, {}};
    Table fig5{"fig5", {"alpha", "mu_star", "mu_S", "Pi_min_segregated", "Pi_min_integrated", "maximin_gain"}, {}};
    for (double a : alpha_grid(cfg)) {
        const Model econ(with_alpha(base, a));
        const Regime regime = classify_regime(econ);
        const SecondBest sb = second_best(econ);
        const StrategyProfile eq = sb.laissez_faire;
        const MarketState st = econ.market_state(eq);
        fig2.rows.push_back({a, to_string(regime), eq.mu_G(), st.w_A, st.w_B, 1.0 - st.w_B / st.w_A});
        fig3.rows.push_back({a, eq.mu_G(), st.s_AR, st.s_BR, st.s_AG, st.s_BG});
        fig4.rows.push_back({a, eq.mu_G(), sb.mu_S, sb.welfare_segregated, sb.welfare_integrated,
                             sb.integration_gain()});
        fig5.rows.push_back({a, eq.mu_G(), sb.mu_S, sb.worst_segregated, sb.worst_integrated,
                             sb.maximin_gain()});
    }
    return {fig1, fig2, fig3, fig4, fig5};
}

inline std::vector<Table> cmd_welfare(const RunConfig& cfg) {
    const Model econ(cfg.model_params());
    const SecondBest sb = second_best(econ);
    const FirstBest fb = first_best(econ, std::max(cfg.grid, 200));
    Table t{"welfare",
            {"alpha", "regime", "mu_star", "mu_S", "multiple_symmetric_roots", "W_laissez_faire",
             "W_integrated", "integration_gain_I", "maximin_gain", "first_best_mu_R", "first_best_mu_G",
             "first_best_kind", "first_best_W", "first_best_ties", "concavity_condition_holds"},
            {}};
    t.rows.push_back({econ.params().alpha, to_string(classify_regime(econ)), sb.laissez_faire.mu_G(), sb.mu_S,
                      std::string(sb.multiple_symmetric_roots ? "true" : "false"), sb.welfare_segregated,
                      sb.welfare_integrated, sb.integration_gain(), sb.maximin_gain(), fb.profile.mu_R(),
                      fb.profile.mu_G(), to_string(fb.kind), fb.welfare, static_cast<long>(fb.ties.size()),
                      std::string(concavity_condition(econ.params()) ? "true" : "false")});
    return {t};
}

inline std::vector<Table> cmd_calibrate(const RunConfig& cfg) {
    const ModelParams m = cfg.model_params();
    const double ah = find_alpha_hat(m);
    Table t{"calibration", {"parameter", "value"}, {}};
    t.rows.push_back({std::string("s0"), m.s0()});
    t.rows.push_back({std::string("c0"), m.c0});
    t.rows.push_back({std::string("c1(p+kappa)"), m.c1_pk()});
    t.rows.push_back({std::string("c1*lambda"), m.c1_lambda()});
    t.rows.push_back({std::string("rho"), m.rho});
    t.rows.push_back({std::string("theta"), m.theta});
    t.rows.push_back({std::string("alpha_hat"), ah});
    t.rows.push_back({std::string("wage_gap_at_alpha_hat"), corner_wage_gap(ah)});
    t.rows.push_back({std::string("w_A_at_alpha_hat"), m.theta * ah});
    t.rows.push_back({std::string("w_B_at_alpha_hat"), m.theta * (1.0 - ah)});
    return {t};
}

inline std::vector<Table> cmd_sensitivity(const RunConfig& cfg) {
    const ElasticityTable e = elasticities(cfg.model_params(), cfg.rel_step);
    Table t{"sensitivity",
            {"parameter", "value", "elasticity_alpha_hat", "elasticity_wage_gap",
             "elasticity_alpha_hat_forward", "elasticity_wage_gap_forward"},
            {}};
    for (const auto& r : e.rows)
        t.rows.push_back({to_string(r.parameter), r.value, r.alpha_hat, r.wage_gap, r.alpha_hat_forward,
                          r.wage_gap_forward});
    return {t};
}

inline std::vector<Table> cmd_mc(const RunConfig& cfg) {
    const ModelParams m = cfg.split_params();
    const Population pop = generate_population(static_cast<std::size_t>(cfg.n), {cfg.mc_mu_R, cfg.mc_mu_G}, m,
                                               cfg.seed);
    LaborSimOptions opt;
    opt.burn_in = cfg.burn_in;
    opt.horizon = cfg.horizon;
    opt.replications = cfg.replications;
    opt.probes = cfg.probes;
    const LaborSimResult res = simulate_labor(pop, m, opt);
    Table t{"mc",
            {"cell", "probe", "agents", "mean_employment", "half_width_95", "mean_friend_measure", "s_at_mean_x",
             "stationary_mean", "jensen_gap"},
            {}};
    for (std::size_t c = 0; c < kCellCount; ++c) {
        const CellResult& r = res.cells[c];
        if (r.agents == 0) continue;
        t.rows.push_back({cell_name(c), std::string(r.probe ? "true" : "false"), static_cast<long>(r.agents), r.mean_employment, r.half_width,
                          r.mean_friend_measure, r.s_at_mean_x, r.stationary_mean, r.jensen_gap});
    }
    return {t};
}

inline const char* kHelpFooter = R"(Output columns (CSV files start with a '# ' header block echoing the resolved
configuration; pass any output file back via --config to reproduce it):
  equilibria.csv   mu_R,mu_G,kind,satisfies_conditions,stability,J_RR,J_RG,J_GR,J_GG,
                   det_jacobian,s_AR,s_AG,s_BR,s_BG,L_A,L_B,w_A,w_B,Pi_AR,Pi_AG,Pi_BR,Pi_BG,
                   dPi_R,dPi_G
  fig1.csv         alpha,mu_G,dPi_G                     payoff gap of Greens along (1, mu_G)
  fig2.csv         alpha,regime,mu_star,w_A,w_B,wage_gap equilibrium wages at (1, mu*)
  fig3.csv         alpha,mu_star,s_AR,s_BR,s_AG,s_BG     equilibrium employment rates
  fig4.csv         alpha,mu_star,mu_S,W_segregated,W_integrated,I
  fig5.csv         alpha,mu_star,mu_S,Pi_min_segregated,Pi_min_integrated,maximin_gain
  welfare.csv      alpha,regime,mu_star,mu_S,multiple_symmetric_roots,W_laissez_faire,
                   W_integrated,integration_gain_I,maximin_gain,first_best_mu_R,
                   first_best_mu_G,first_best_kind,first_best_W,first_best_ties,
                   concavity_condition_holds
  calibration.csv  parameter,value
  sensitivity.csv  parameter,value,elasticity_alpha_hat,elasticity_wage_gap,
                   elasticity_alpha_hat_forward,elasticity_wage_gap_forward
  mc.csv           cell,probe,agents,mean_employment,half_width_95,mean_friend_measure,
                   (probe=true: empty cell filled with deviator probes)
                   s_at_mean_x,stationary_mean,jensen_gap
Numbers are written with 17 significant digits.
Exit codes: 0 ok, 2 configuration error, 3 solver failure, 4 I/O error.
Environment: SEGNET_THREADS sets the worker thread count.)";

/// Entry point shared by the executable and the tests.
inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout,
                   std::ostream& err = std::cerr) {
    CLI::App app{"Occupational segregation in homophilous job-contact networks"};
    app.footer(kHelpFooter);
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path, out_dir = ".", format;
    std::optional<std::uint64_t> seed;
    std::optional<double> alpha;
    std::optional<int> grid;
    app.add_option("--config", config_path, "key=value configuration file (or a previous output file)");
    app.add_option("--out", out_dir, "output directory")->capture_default_str();
    app.add_option("--seed", seed, "random seed");
    app.add_option("--alpha", alpha, "Cobb-Douglas share of occupation A");
    app.add_option("--grid", grid, "grid resolution");
    app.add_option("--format", format, "output format")->check(CLI::IsMember({"csv", "json"}));

    struct Sub {
        const char* name;
        const char* help;
        std::vector<Table> (*run)(const RunConfig&);
    };
    const Sub subs[] = {
        {"equilibria", "enumerate equilibria with stability verdicts", cmd_equilibria},
        {"sweep", "figure data over alpha (fig1..fig5)", cmd_sweep},
        {"welfare", "first-best optimum and second-best comparison", cmd_welfare},
        {"calibrate", "calibrated parameter table and alpha_hat", cmd_calibrate},
        {"sensitivity", "elasticities of alpha_hat and the corner wage gap", cmd_sensitivity},
        {"mc", "Monte Carlo network validation of the employment function", cmd_mc},
    };
    for (const auto& s : subs) app.add_subcommand(s.name, s.help);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kConfigError;
    }

    const Sub* chosen = nullptr;
    for (const auto& s : subs)
        if (app.got_subcommand(s.name)) chosen = &s;

    RunConfig cfg;
    try {
        if (!config_path.empty()) cfg = load_config(config_path);
        if (seed) cfg.seed = *seed;
        if (alpha) cfg.alpha = *alpha;
        if (grid) cfg.grid = *grid;
        if (!format.empty()) set_config_value(cfg, "format", format);
        validate_config(cfg);
    } catch (const Error& e) {
        err << "configuration error: " << e.what() << "\n";
        return kConfigError;
    }

    std::filesystem::path dir;
    try {
        dir = prepare_out_dir(out_dir);
    } catch (const IoError& e) {
        err << "I/O error: " << e.what() << "\n";
        return kIoError;
    }

    std::vector<Table> tables;
    try {
        tables = chosen->run(cfg);
    } catch (const ConfigError& e) {
        err << "configuration error: " << e.what() << "\n";
        return kConfigError;
    } catch (const InvalidSplit& e) {
        err << "configuration error: " << e.what() << "\n";
        return kConfigError;
    } catch (const InvalidParams& e) {
        err << "configuration error: " << e.what() << "\n";
        return kConfigError;
    } catch (const Error& e) {
        err << "solver failure: " << e.what() << "\n";
        return kSolverError;
    }

    try {
        for (const auto& p : write_tables(tables, chosen->name, cfg, dir)) out << p.string() << "\n";
    } catch (const IoError& e) {
        err << "I/O error: " << e.what() << "\n";
        return kIoError;
    }
    return kOk;
}

} // namespace segnet::cli
