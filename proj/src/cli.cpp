#include "closedecon/cli.hpp"

#include "closedecon/ccg.hpp"
#include "closedecon/equilibrium.hpp"
#include "closedecon/io.hpp"
#include "closedecon/tatonnement.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <sstream>

namespace closedecon {

namespace {

struct Common {
    double tol = 1e-7;
    std::string normalization = "revenue";
    std::uint64_t seed = 0;
    std::string format = "csv";
    bool error_json = false;
    std::vector<std::string> sets;  // name=value bindings
};

void add_common(CLI::App* sub, Common& c) {
    sub->add_option("--tol", c.tol, "Verification tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--normalization", c.normalization, "money, revenue or numeraire:<j>");
    sub->add_option("--seed", c.seed, "Seed for Newton restarts");
    sub->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"csv", "json", "dot"}));
    sub->add_flag("--error-json", c.error_json, "Print errors as JSON on stderr");
    sub->add_option("--set", c.sets, "Bind a parameter, name=value");
}

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            size_t used = 0;
            out.push_back(std::stod(tok, &used));
            if (used != tok.size() && tok.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
            throw Error(ErrorCode::UsageError, "not a number list: '" + text + "'");
        }
    }
    if (out.empty()) throw Error(ErrorCode::UsageError, "empty number list");
    return out;
}

std::pair<std::string, std::string> split_binding(const std::string& s) {
    const auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0) throw Error(ErrorCode::UsageError, "expected name=value, got '" + s + "'");
    return {s.substr(0, eq), s.substr(eq + 1)};
}

// Base economy with --set bindings applied.
Economy bound_economy(const ParametricFamily& fam, const Common& c) {
    if (c.sets.empty()) return fam.base;
    std::vector<double> values;
    for (const auto& p : fam.params) values.push_back(fam.base.utility(p.row, p.col));
    for (const auto& s : c.sets) {
        const auto [name, value] = split_binding(s);
        const int k = fam.index_of(name);
        if (k < 0) throw Error(ErrorCode::UsageError, "unknown parameter '" + name + "'");
        values[k] = parse_list(value).at(0);
    }
    return fam.instantiate(values);
}

SolveOptions solve_options(const Common& c) {
    SolveOptions o;
    o.verify_tol = c.tol;
    o.normalization = Normalization::parse(c.normalization);
    o.seed = c.seed;
    return o;
}

int exit_code_for(ErrorCode code) {
    switch (code) {
        case ErrorCode::IterationLimit:
        case ErrorCode::NonConvergence:
        case ErrorCode::NumericFailure:
        case ErrorCode::IncompleteTable:
        case ErrorCode::FormulaUndefined:
        case ErrorCode::UndefinedBB:
        case ErrorCode::NoUsefulGoods:
            return 1;
        default:
            return 2;
    }
}

void report_error(std::ostream& err, bool as_json, const std::string& code, const std::string& message,
                  const std::vector<Violation>& violations = {}) {
    if (as_json) {
        nlohmann::ordered_json j;
        j["error"] = code;
        j["message"] = message;
        j["violations"] = nlohmann::ordered_json::array();
        for (const auto& v : violations) j["violations"].push_back({{"code", to_string(v.code)}, {"detail", v.detail}});
        err << j.dump() << "\n";
    } else {
        err << "error (" << code << "): " << message << "\n";
        for (const auto& v : violations) err << "  " << to_string(v.code) << ": " << v.detail << "\n";
    }
}

void emit_point(std::ostream& out, const Common& c, const Economy& econ, const EquilibriumPoint& pt) {
    const CombinatorialData data = extract_combinatorics(econ, pt);
    if (c.format == "json") {
        out << point_json(econ, pt, data);
    } else if (c.format == "dot") {
        out << point_dot(econ, pt);
    } else {
        out << point_csv(econ, pt);
        out << "forest,,," << data.canonical() << "\n";
        out << "components,,," << data.components << "\n";
    }
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Closed-economy equilibrium engine"};
    app.require_subcommand(1);
    Common c;
    std::string scenario;

    auto* solve = app.add_subcommand("solve", "Solve for an equilibrium (tatonnement, then forest search)");
    auto* verify = app.add_subcommand("verify", "Check a candidate point");
    auto* taton = app.add_subcommand("taton", "Run tatonnement and print the trace as JSON lines");
    auto* game = app.add_subcommand("game", "Sweep a parameter grid into a game table");
    auto* zones = app.add_subcommand("zones", "Label a two-parameter grid by combinatorial data");
    auto* recon = app.add_subcommand("reconstruct", "Rebuild an equilibrium from a forest file");
    auto* delta = app.add_subcommand("delta", "Compare two scenarios");
    for (auto* sub : {solve, verify, taton, game, zones, recon, delta}) {
        sub->add_option("scenario", scenario, "Scenario JSON file")->required();
        add_common(sub, c);
    }

    std::string candidate;
    verify->add_option("--candidate", candidate, "Candidate point JSON")->required();

    std::string p0_text, trace_out;
    int max_iters = 1000;
    taton->add_option("--p0", p0_text, "Initial prices, comma separated");
    taton->add_option("--max-iters", max_iters, "Iteration budget")->check(CLI::NonNegativeNumber);
    taton->add_option("--out", trace_out, "Write the trace here instead of stdout");

    std::string alpha_text, beta_text, convention = "per-capita";
    std::vector<std::string> grid_texts;
    bool nash = false;
    game->add_option("--alpha", alpha_text, "Grid for parameter 'alpha'");
    game->add_option("--beta", beta_text, "Grid for parameter 'beta'");
    game->add_option("--grid", grid_texts, "Grid for any parameter, name=v1,v2,...");
    game->add_flag("--nash", nash, "Mark pure Nash cells");
    game->add_option("--convention", convention, "per-capita or total");

    int resolution = 12;
    std::string xs_text, ys_text, legend_out;
    zones->add_option("--resolution", resolution, "Points per axis")->check(CLI::PositiveNumber);
    zones->add_option("--x", xs_text, "Explicit values for the first parameter");
    zones->add_option("--y", ys_text, "Explicit values for the second parameter");
    zones->add_option("--legend", legend_out, "Write the legend JSON here");

    std::string forest_path;
    recon->add_option("--forest", forest_path, "Forest JSON")->required();

    std::string after_path, supply_text;
    std::vector<std::string> tech_entries;
    delta->add_option("--after", after_path, "Scenario after the change");
    delta->add_option("--supply", supply_text, "New labor supply, comma separated");
    delta->add_option("--technology", tech_entries, "Technology entry change, i,j=value (1-based)");
    delta->add_option("--convention", convention, "per-capita or total");

    std::vector<std::string> argv_rev(args.rbegin(), args.rend());
    try {
        app.parse(argv_rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        const bool as_json = std::find(args.begin(), args.end(), "--error-json") != args.end();
        report_error(err, as_json, "UsageError", e.what());
        return 2;
    }

    try {
        const ParametricFamily fam = load_scenario(scenario);
        const Economy econ = bound_economy(fam, c);
        const SolveOptions opts = solve_options(c);

        if (*solve) {
            const SolveResult r = solve_equilibrium(econ, opts);
            if (!r.found) {
                err << "no equilibrium found (tatonnement: " << to_string(r.taton_status) << ")\n";
                return 1;
            }
            emit_point(out, c, econ, r.point);
            if (c.format == "csv") {
                out << "method,,," << r.method << "\n";
                out << "multiplicity,,," << r.multiplicity << "\n";
                out << "generic,,," << (r.generic ? "true" : "false") << "\n";
            }
            return 0;
        }

        if (*verify) {
            const EquilibriumPoint pt = load_point(candidate);
            if (pt.prices.size() != econ.n() || pt.wages.size() != econ.m() || pt.quantities.size() != econ.n() ||
                pt.allocation.rows() != econ.m() || pt.allocation.cols() != econ.n())
                throw Error(ErrorCode::DimensionMismatch, "candidate does not match the scenario's dimensions");
            const CheckReport rep = verify_sm(econ, pt, c.tol);
            const CombinatorialData data = extract_combinatorics(econ, pt);
            if (c.format == "json") {
                nlohmann::ordered_json j;
                j["verified"] = rep.ok();
                j["violations"] = rep.violations;
                j["forest"] = data.canonical();
                j["components"] = data.components;
                out << j.dump(2) << "\n";
            } else {
                out << "verified," << (rep.ok() ? "true" : "false") << "\n";
                out << "forest," << data.canonical() << "\n";
                out << "components," << data.components << "\n";
                for (const auto& v : rep.violations) out << "violation," << v << "\n";
            }
            return rep.ok() ? 0 : 1;
        }

        if (*taton) {
            const Vec p0 = p0_text.empty() ? Vec(Vec::Ones(econ.n())) : [&] {
                const auto v = parse_list(p0_text);
                return Vec(Eigen::Map<const Vec>(v.data(), static_cast<Eigen::Index>(v.size())));
            }();
            TatonnementOptions to;
            to.max_iters = max_iters;
            to.verify_tol = c.tol;
            const TatonnementTrace tr = run_tatonnement(econ, p0, to);
            const std::string text = trace_jsonl(tr);
            if (trace_out.empty()) {
                out << text;
            } else {
                std::ofstream f(trace_out, std::ios::binary);
                if (!f) throw Error(ErrorCode::UsageError, "cannot write '" + trace_out + "'");
                f << text;
            }
            return tr.status == TatonStatus::Converged ? 0 : 1;
        }

        if (*game) {
            if (fam.params.empty()) throw Error(ErrorCode::UsageError, "scenario has no parameters");
            std::vector<std::vector<double>> grids(fam.params.size());
            auto bind = [&](const std::string& name, const std::string& text, size_t fallback) {
                int k = fam.index_of(name);
                if (k < 0) {
                    if (fallback >= fam.params.size()) throw Error(ErrorCode::UsageError, "no parameter for --" + name);
                    k = static_cast<int>(fallback);
                }
                grids[k] = parse_list(text);
            };
            if (!alpha_text.empty()) bind("alpha", alpha_text, 0);
            if (!beta_text.empty()) bind("beta", beta_text, 1);
            for (const auto& g : grid_texts) {
                const auto [name, text] = split_binding(g);
                if (fam.index_of(name) < 0) throw Error(ErrorCode::UsageError, "unknown parameter '" + name + "'");
                bind(name, text, fam.params.size());
            }
            const GameTable t = sweep(fam, grids, parse_convention(convention), opts);
            std::vector<bool> is_nash(t.cells(), false);
            if (nash)
                for (const auto& idx : pure_nash(t)) is_nash[t.ravel(idx)] = true;
            if (c.format == "json") {
                auto j = nlohmann::ordered_json::parse(game_json(t, fam.base));
                if (nash) {
                    j["nash"] = nlohmann::ordered_json::array();
                    for (size_t k = 0; k < t.cells(); ++k)
                        if (is_nash[k]) {
                            nlohmann::ordered_json idx = nlohmann::ordered_json::array();
                            for (int v : t.unravel(k)) idx.push_back(v + 1);
                            j["nash"].push_back(idx);
                        }
                }
                out << j.dump(2) << "\n";
            } else {
                std::istringstream rows(game_csv(t, fam.base));
                std::string line;
                bool header = true;
                size_t cell = 0;
                while (std::getline(rows, line)) {
                    if (nash) line += header ? ",nash" : (is_nash[cell++] ? ",1" : ",0");
                    header = false;
                    out << line << "\n";
                }
            }
            bool complete = true;
            for (bool s : t.solved) complete = complete && s;
            return complete ? 0 : 1;
        }

        if (*zones) {
            if (fam.params.size() != 2) throw Error(ErrorCode::UsageError, "zones needs a scenario with exactly two parameters");
            ZoneMap z;
            if (!xs_text.empty() || !ys_text.empty()) {
                if (xs_text.empty() || ys_text.empty()) throw Error(ErrorCode::UsageError, "--x and --y go together");
                z = zone_map(fam, parse_list(xs_text), parse_list(ys_text), opts);
            } else {
                z = zone_map(fam, resolution, opts);
            }
            if (c.format == "json") {
                nlohmann::ordered_json j;
                j["cells"] = nlohmann::ordered_json::array();
                for (size_t ix = 0; ix < z.xs.size(); ++ix)
                    for (size_t iy = 0; iy < z.ys.size(); ++iy)
                        j["cells"].push_back({{z.x_name, z.xs[ix]}, {z.y_name, z.ys[iy]}, {"label", z.at(ix, iy)}});
                j["legend"] = nlohmann::ordered_json::parse(zone_legend_json(z));
                out << j.dump(2) << "\n";
            } else {
                out << zone_csv(z);
            }
            if (!legend_out.empty()) {
                std::ofstream f(legend_out, std::ios::binary);
                if (!f) throw Error(ErrorCode::UsageError, "cannot write '" + legend_out + "'");
                f << zone_legend_json(z);
            }
            return 0;
        }

        if (*recon) {
            ReconstructOptions ro;
            ro.normalization = opts.normalization;
            ro.seed = c.seed;
            const ReconstructResult r = reconstruct_from_forest(econ, load_forest(forest_path), ro);
            if (r.status != ReconstructStatus::Feasible) {
                out << "status," << to_string(r.status) << "\n";
                out << "reason," << r.reason << "\n";
                return 1;
            }
            emit_point(out, c, econ, r.point);
            return 0;
        }

        if (*delta) {
            if (after_path.empty() && supply_text.empty() && tech_entries.empty())
                throw Error(ErrorCode::UsageError, "delta needs --after, --supply or --technology");
            Economy after = econ;
            if (!after_path.empty()) after = bound_economy(load_scenario(after_path), c);
            if (!supply_text.empty()) {
                const auto v = parse_list(supply_text);
                after = with_supply(after, Eigen::Map<const Vec>(v.data(), static_cast<Eigen::Index>(v.size())));
            }
            if (!tech_entries.empty()) {
                Mat T = after.technology;
                for (const auto& s : tech_entries) {
                    const auto [cell, value] = split_binding(s);
                    const auto ij = parse_list(cell);
                    if (ij.size() != 2) throw Error(ErrorCode::UsageError, "expected i,j=value, got '" + s + "'");
                    const int i = static_cast<int>(ij[0]) - 1, j = static_cast<int>(ij[1]) - 1;
                    if (i < 0 || i >= T.rows() || j < 0 || j >= T.cols())
                        throw Error(ErrorCode::UsageError, "technology entry out of range in '" + s + "'");
                    T(i, j) = parse_list(value).at(0);
                }
                after = with_technology(after, T);
            }
            const ScenarioDelta d = scenario_delta(econ, after, parse_convention(convention), opts);
            if (!d.solved) {
                err << "one of the scenarios has no equilibrium\n";
                return 1;
            }
            auto arrow = [](int f) { return f > 0 ? "up" : (f < 0 ? "down" : "unchanged"); };
            if (c.format == "json") {
                nlohmann::ordered_json j;
                auto vec = [](const Vec& v) { return std::vector<double>(v.data(), v.data() + v.size()); };
                j["production_before"] = vec(d.q_before);
                j["production_after"] = vec(d.q_after);
                j["payoff_before"] = vec(d.payoff_before);
                j["payoff_after"] = vec(d.payoff_after);
                std::vector<std::string> qf, bf;
                for (int f : d.q_flags) qf.push_back(arrow(f));
                for (int f : d.payoff_flags) bf.push_back(arrow(f));
                j["production_change"] = qf;
                j["payoff_change"] = bf;
                out << j.dump(2) << "\n";
            } else {
                out << "kind,index,before,after,change\n";
                for (int j = 0; j < d.q_before.size(); ++j)
                    out << "production," << j + 1 << "," << format_number(d.q_before(j)) << "," << format_number(d.q_after(j)) << ","
                        << arrow(d.q_flags[j]) << "\n";
                for (int i = 0; i < d.payoff_before.size(); ++i)
                    out << "payoff," << i + 1 << "," << format_number(d.payoff_before(i)) << "," << format_number(d.payoff_after(i))
                        << "," << arrow(d.payoff_flags[i]) << "\n";
            }
            return 0;
        }
    } catch (const Error& e) {
        report_error(err, c.error_json, to_string(e.code()), e.what(), e.violations());
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        report_error(err, c.error_json, "InternalError", e.what());
        return 2;
    }
    return 2;
}

}  // namespace closedecon
