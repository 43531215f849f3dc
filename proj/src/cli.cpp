#include "shear/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <ostream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "shear/forcing.hpp"
#include "shear/kicked_map.hpp"
#include "shear/markov.hpp"
#include "shear/sweep.hpp"

namespace shear {

namespace {

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SolverFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

unsigned workers_from_env() {
    const char* v = std::getenv("SHEAR_WORKERS");
    if (!v || !*v) return 0;
    char* end = nullptr;
    const long n = std::strtol(v, &end, 10);
    if (*end != '\0' || n < 0) throw InputError(std::string("invalid SHEAR_WORKERS '") + v + "'");
    return static_cast<unsigned>(n);
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    f << text;
    if (!f) throw std::runtime_error("write failed for " + path);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Forcing order, Markov symbolic dynamics and tongue sweeps for shear maps of the torus", "shear"};
    app.require_subcommand(1);

    std::string a_text, b_text, pair_text, out_path, config_path, csv_path, svg_path;
    std::int64_t max_den = 10;
    int depth = 3, max_period = 12, period = 1, grid_n = 8;
    std::string k_text, omega_text, wj_text, tol_text = "1e-12";
    bool show_tips = false;

    auto* fq = app.add_subcommand("force-query", "Does A force B?");
    fq->add_option("A", a_text, "orbit \"q/p\" or pair \"q1/p1 v q2/p2\"")->required();
    fq->add_option("B", b_text, "orbit or pair")->required();

    auto* fc = app.add_subcommand("force-closure", "Everything a pair forces, up to a denominator bound (JSON)");
    fc->add_option("PAIR", pair_text)->required();
    fc->add_option("--max-den", max_den)->required();

    auto* ft = app.add_subcommand("force-tree", "Farey mediant tree below a pair");
    ft->add_option("PAIR", pair_text)->required();
    ft->add_option("--depth", depth)->required();

    auto* mg = app.add_subcommand("markov-graph", "Skeleton transition graph as DOT");
    mg->add_option("PAIR", pair_text)->required();
    mg->add_option("--out", out_path, "DOT file (stdout if omitted)");

    auto* mo = app.add_subcommand("markov-orbits", "Symbolic cycles and their rotation numbers (JSON)");
    mo->add_option("PAIR", pair_text)->required();
    mo->add_option("--max-period", max_period)->required();

    auto* mv = app.add_subcommand("markov-verify", "Check realised rotation numbers against the forcing closure");
    mv->add_option("PAIR", pair_text)->required();
    mv->add_option("--max-den", max_den)->required();

    auto* of = app.add_subcommand("orbit-find", "Periodic orbits of the kicked map (JSON)");
    of->add_option("--k", k_text)->required();
    of->add_option("--omega", omega_text)->required();
    of->add_option("--period", period)->required();
    of->add_option("--wj", wj_text, "J-winding per period")->required();
    of->add_option("--grid", grid_n, "seeds per axis")->capture_default_str();
    of->add_option("--tol", tol_text, "Newton tolerance")->capture_default_str();

    auto* sr = app.add_subcommand("sweep-run", "Scan the (k, omega) plane for tongues");
    sr->add_option("--config", config_path, "key=value config file")->required();
    sr->add_option("--csv", csv_path)->required();
    sr->add_option("--svg", svg_path);
    sr->add_flag("--tips", show_tips, "print tongue tips to stdout");

    std::vector<std::string> argv(args.rbegin(), args.rend());
    try {
        app.parse(argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "shear: " << e.what() << '\n';
        return kExitInput;
    }

    try {
        if (*fq) {
            ForcingElement a, b;
            try {
                a = parse_element(a_text);
                b = parse_element(b_text);
            } catch (const std::exception& e) {
                throw InputError(e.what());
            }
            out << (forces(a, b) ? "true" : "false") << '\n';
            return kExitOk;
        }

        auto pair = [&]() -> FareyPair {
            try {
                return parse_pair(pair_text);
            } catch (const std::exception& e) {
                throw InputError(e.what());
            }
        };

        if (*fc) {
            if (max_den < 1) throw InputError("--max-den must be positive");
            nlohmann::json arr = nlohmann::json::array();
            for (const auto& e : forced_set(pair(), max_den)) arr.push_back(to_json(e));
            out << arr.dump(2) << '\n';
            return kExitOk;
        }
        if (*ft) {
            if (depth < 0 || depth > kMaxTreeDepth) throw InputError("--depth must be in [0, 32]");
            out << render_tree(mediant_tree(pair(), depth));
            return kExitOk;
        }
        if (*mg) {
            const auto dot = build_skeleton_graph(pair()).to_dot();
            if (out_path.empty())
                out << dot;
            else
                write_text(out_path, dot);
            return kExitOk;
        }
        if (*mo) {
            if (max_period < 0 || max_period > kMaxCycleLength) throw InputError("--max-period must be in [0, 64]");
            const auto p = pair();
            nlohmann::json arr = nlohmann::json::array();
            for (const auto& c : enumerate_cycles(build_skeleton_graph(p), max_period))
                arr.push_back({{"word", c.canonical()}, {"rotation", cycle_rotation_number(c, p).str()}});
            out << arr.dump() << '\n';
            return kExitOk;
        }
        if (*mv) {
            if (max_den < 1 || max_den > kMaxCycleLength) throw InputError("--max-den must be in [1, 64]");
            const auto report = markov_verify(pair(), max_den);
            for (const auto& r : report.missing) out << "missing " << r << '\n';
            for (const auto& r : report.out_of_range) out << "out-of-range " << r << '\n';
            out << (report.pass ? "PASS" : "FAIL") << '\n';
            return report.pass ? kExitOk : kExitInternal;
        }
        if (*of) {
            MapParams params;
            NewtonOptions opts;
            std::int64_t w_J = 0;
            try {
                params = MapParams(parse_real(k_text), parse_real(omega_text));
                opts.tol = parse_real(tol_text);
                std::size_t used = 0;
                w_J = std::stoll(wj_text, &used);
                if (used != wj_text.size()) throw std::invalid_argument("cannot parse --wj '" + wj_text + "'");
            } catch (const std::exception& e) {
                throw InputError(e.what());
            }
            if (period < 1) throw InputError("--period must be positive");
            if (grid_n < 1) throw InputError("--grid must be positive");
            if (!(opts.tol > 0.0)) throw InputError("--tol must be positive");
            const auto orbits = orbit_search_grid(params, period, w_J, grid_n, opts);
            if (orbits.empty()) throw SolverFailure("no orbit found");
            nlohmann::json arr = nlohmann::json::array();
            for (const auto& o : orbits) arr.push_back(to_json(o));
            out << arr.dump(2) << '\n';
            return kExitOk;
        }
        if (*sr) {
            SweepConfig cfg;
            unsigned workers = 0;
            try {
                cfg = load_sweep_config(config_path);
                cfg.validate();
                workers = workers_from_env();
            } catch (const std::exception& e) {
                throw InputError(e.what());
            }
            const auto records = run_sweep(cfg, workers);
            emit_csv(records, csv_path);
            if (!svg_path.empty()) emit_svg(records, svg_path);
            if (show_tips) {
                for (const auto& t : tip_locations(records)) {
                    char line[128];
                    std::snprintf(line, sizeof line, "%d %lld %.17g %.17g\n", t.p, static_cast<long long>(t.q),
                                  t.omega, t.k);
                    out << line;
                }
            }
            return kExitOk;
        }
    } catch (const InputError& e) {
        err << "shear: " << e.what() << '\n';
        return kExitInput;
    } catch (const SolverFailure& e) {
        err << "shear: " << e.what() << '\n';
        return kExitSolver;
    } catch (const std::domain_error& e) {
        err << "shear: " << e.what() << '\n';
        return kExitInput;
    } catch (const std::exception& e) {
        err << "shear: internal error: " << e.what() << '\n';
        return kExitInternal;
    }
    return kExitInternal;
}

}  // namespace shear
