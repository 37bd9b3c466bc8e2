#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "kronschro/experiments.hpp"
#include "kronschro/kernels.hpp"

using json = nlohmann::json;
using namespace kronschro;

namespace {

struct RunConfig {
    std::string problem = "gaussian_1d";
    int p = 2;
    std::vector<int> n_el = {8};
    double T = -1; // <0: take the problem's own value
    double nu = -1;
    double tol = 1e-8;
    int maxit = 200;
    std::string prec = "fd";
    std::string method = "least_squares"; // infsup
    std::string kind = "space";           // spectral
    std::string output;                   // empty: stdout
    std::string format = "csv";
    long seed = 1234;
    int threads = 1;
};

class ConfigError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

void apply_json(RunConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed config: ") + e.what());
    }
    static const std::set<std::string> known = {
        "problem", "p",      "n_el",   "T",    "nu",     "tol",  "maxit",
        "prec",    "method", "kind",   "output", "format", "seed", "threads"};
    for (const auto& [key, val] : j.items())
        if (!known.count(key))
            throw ConfigError("unknown config key: " + key);
    try {
        if (j.contains("problem")) cfg.problem = j["problem"].get<std::string>();
        if (j.contains("p")) cfg.p = j["p"].get<int>();
        if (j.contains("n_el")) {
            if (j["n_el"].is_array())
                cfg.n_el = j["n_el"].get<std::vector<int>>();
            else
                cfg.n_el = {j["n_el"].get<int>()};
        }
        if (j.contains("T")) cfg.T = j["T"].get<double>();
        if (j.contains("nu")) cfg.nu = j["nu"].get<double>();
        if (j.contains("tol")) cfg.tol = j["tol"].get<double>();
        if (j.contains("maxit")) cfg.maxit = j["maxit"].get<int>();
        if (j.contains("prec")) cfg.prec = j["prec"].get<std::string>();
        if (j.contains("method")) cfg.method = j["method"].get<std::string>();
        if (j.contains("kind")) cfg.kind = j["kind"].get<std::string>();
        if (j.contains("output")) cfg.output = j["output"].get<std::string>();
        if (j.contains("format")) cfg.format = j["format"].get<std::string>();
        if (j.contains("seed")) cfg.seed = j["seed"].get<long>();
        if (j.contains("threads")) cfg.threads = j["threads"].get<int>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("bad config value: ") + e.what());
    }
}

void validate(const RunConfig& cfg) {
    if (cfg.p < 1)
        throw ConfigError("p must be positive");
    if (cfg.n_el.empty())
        throw ConfigError("n_el list must not be empty");
    for (int n : cfg.n_el)
        if (n < 1)
            throw ConfigError("n_el entries must be positive");
    if (!(cfg.tol > 0))
        throw ConfigError("tol must be positive");
    if (cfg.maxit < 1)
        throw ConfigError("maxit must be positive");
    if (cfg.threads < 1)
        throw ConfigError("threads must be positive");
    if (cfg.prec != "fd" && cfg.prec != "none")
        throw ConfigError("prec must be 'fd' or 'none'");
    if (cfg.format != "csv" && cfg.format != "json")
        throw ConfigError("format must be 'csv' or 'json'");
    if (cfg.method != "least_squares" && cfg.method != "galerkin")
        throw ConfigError("method must be 'least_squares' or 'galerkin'");
    if (cfg.kind != "space" && cfg.kind != "time")
        throw ConfigError("kind must be 'space' or 'time'");
}

void emit(const RunConfig& cfg, const std::vector<std::string>& columns,
          const json& rows) {
    std::ostringstream out;
    if (cfg.format == "json") {
        out << rows.dump(2) << "\n";
    } else {
        for (std::size_t i = 0; i < columns.size(); ++i)
            out << (i ? "," : "") << columns[i];
        out << "\n";
        for (const auto& row : rows) {
            for (std::size_t i = 0; i < columns.size(); ++i) {
                const auto& v = row[columns[i]];
                out << (i ? "," : "");
                if (v.is_number_float()) {
                    char buf[32];
                    std::snprintf(buf, sizeof buf, "%.12g", v.get<double>());
                    out << buf;
                } else if (v.is_string()) {
                    out << v.get<std::string>();
                } else {
                    out << v.dump();
                }
            }
            out << "\n";
        }
    }
    if (cfg.output.empty()) {
        std::cout << out.str();
    } else {
        std::ofstream f(cfg.output);
        if (!f)
            throw ConfigError("unwritable output path: " + cfg.output);
        f << out.str();
    }
}

ManufacturedSolution configured_problem(const RunConfig& cfg) {
    ManufacturedSolution s = find_problem(cfg.problem);
    if (cfg.T > 0 && cfg.T != s.T)
        throw ConfigError("T cannot be changed for a named problem");
    if (cfg.nu > 0 && cfg.nu != s.nu)
        throw ConfigError("nu cannot be changed for a named problem");
    return s;
}

int run_solve(const RunConfig& cfg) {
    const ManufacturedSolution s = configured_problem(cfg);
    PcgOptions opts;
    opts.tol = cfg.tol;
    opts.maxit = cfg.maxit;
    json rows = json::array();
    bool all_converged = true;
    for (int n_el : cfg.n_el) {
        const SpaceTimeProblem prob =
            SpaceTimeProblem::matched(s.d, cfg.p, n_el, s.T, s.nu);
        const Preconditioner prec = cfg.prec == "fd" ? Preconditioner::FastDiag
                                                     : Preconditioner::None;
        const ProblemSolution sol = solve_problem(prob, s, prec, opts);
        const auto [eL2, eV] = error_norms(prob, sol.full_coeffs, s);
        all_converged = all_converged && sol.report.converged;
        rows.push_back({{"problem", s.name},
                        {"p", cfg.p},
                        {"nel", n_el},
                        {"iters", sol.report.iterations},
                        {"converged", sol.report.converged},
                        {"errL2", eL2},
                        {"errV", eV}});
    }
    emit(cfg, {"problem", "p", "nel", "iters", "converged", "errL2", "errV"}, rows);
    return all_converged ? 0 : 3;
}

int run_convergence(const RunConfig& cfg) {
    const ManufacturedSolution s = configured_problem(cfg);
    const auto recs = convergence_study(s, cfg.p, cfg.n_el);
    json rows = json::array();
    for (const auto& r : recs)
        rows.push_back({{"h", r.h},
                        {"Ndof", r.Ndof},
                        {"errL2", r.errL2},
                        {"errV", r.errV},
                        {"order", r.order}});
    emit(cfg, {"h", "Ndof", "errL2", "errV", "order"}, rows);
    return 0;
}

int run_infsup(const RunConfig& cfg) {
    const InfSupMethod m = cfg.method == "galerkin" ? InfSupMethod::Galerkin
                                                    : InfSupMethod::LeastSquares;
    json rows = json::array();
    for (int n_el : cfg.n_el)
        rows.push_back({{"method", cfg.method},
                        {"p", cfg.p},
                        {"nel", n_el},
                        {"alpha", infsup_constant(m, cfg.p, n_el)}});
    emit(cfg, {"method", "p", "nel", "alpha"}, rows);
    return 0;
}

int run_spectral(const RunConfig& cfg) {
    json rows = json::array();
    for (int n_el : cfg.n_el) {
        const std::vector<double> ev = cfg.kind == "space"
                                           ? spectral_equivalence_space(cfg.p, n_el)
                                           : spectral_equivalence_time(cfg.p, n_el);
        rows.push_back({{"kind", cfg.kind},
                        {"p", cfg.p},
                        {"nel", n_el},
                        {"lambda_min", ev.front()},
                        {"lambda_max", ev.back()}});
    }
    emit(cfg, {"kind", "p", "nel", "lambda_min", "lambda_max"}, rows);
    return 0;
}

int run_condtable(const RunConfig& cfg, const std::vector<int>& ps) {
    const auto recs = condition_table(ps.empty() ? std::vector<int>{cfg.p} : ps,
                                      cfg.n_el);
    json rows = json::array();
    for (const auto& r : recs)
        rows.push_back({{"p", r.p}, {"nel", r.n_el}, {"kappa2", r.kappa2}});
    emit(cfg, {"p", "nel", "kappa2"}, rows);
    return 0;
}

int run_perf(const RunConfig& cfg) {
    const ManufacturedSolution s = configured_problem(cfg);
    PcgOptions opts;
    opts.tol = cfg.tol;
    opts.maxit = cfg.maxit;
    const Preconditioner prec =
        cfg.prec == "fd" ? Preconditioner::FastDiag : Preconditioner::None;
    json rows = json::array();
    for (int n_el : cfg.n_el) {
        const PerfRecord r = performance_run(s, cfg.p, n_el, prec, opts);
        rows.push_back({{"problem", r.problem},
                        {"p", r.p},
                        {"nel", r.n_el},
                        {"prec", r.prec},
                        {"iters", r.iters},
                        {"setup_s", r.setup_s},
                        {"solve_s", r.solve_s},
                        {"converged", r.converged}});
    }
    emit(cfg, {"problem", "p", "nel", "prec", "iters", "setup_s", "solve_s",
               "converged"},
         rows);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Space-time least-squares spline solver for the linear "
                 "Schroedinger equation"};
    app.require_subcommand(1);
    app.fallthrough(); // allow global flags after the subcommand

    RunConfig cfg;
    if (const char* env = std::getenv("KRONSCHRO_THREADS"))
        cfg.threads = std::atoi(env);

    std::string config_path;
    std::vector<int> ps; // condtable only
    app.add_option("--config", config_path, "JSON run configuration");
    app.add_option("--threads", cfg.threads, "worker thread count");
    app.add_option("--seed", cfg.seed, "seed for randomized checks");

    auto add_common = [&](CLI::App* sub, bool with_problem) {
        if (with_problem)
            sub->add_option("--problem", cfg.problem,
                            "gaussian_1d | high_mode_1d | traveling_wave_2d");
        sub->add_option("--p", cfg.p, "spline degree");
        sub->add_option("--nel", cfg.n_el, "elements per direction (list)");
        sub->add_option("--tol", cfg.tol, "solver tolerance");
        sub->add_option("--maxit", cfg.maxit, "iteration cap");
        sub->add_option("--prec", cfg.prec, "fd | none");
        sub->add_option("--output,-o", cfg.output, "output path (default stdout)");
        sub->add_option("--format", cfg.format, "csv | json");
    };
    CLI::App* solve = app.add_subcommand("solve", "solve one problem instance");
    add_common(solve, true);
    CLI::App* conv = app.add_subcommand("convergence", "refinement study");
    add_common(conv, true);
    CLI::App* infsup = app.add_subcommand("infsup", "inf-sup constants");
    add_common(infsup, false);
    infsup->add_option("--method", cfg.method, "least_squares | galerkin");
    CLI::App* spectral = app.add_subcommand("spectral", "pencil spectra");
    add_common(spectral, false);
    spectral->add_option("--kind", cfg.kind, "space | time");
    CLI::App* condtable = app.add_subcommand("condtable", "kappa_2(U) table");
    add_common(condtable, false);
    condtable->add_option("--ps", ps, "degrees (list)");
    CLI::App* perf = app.add_subcommand("perf", "solver benchmark rows");
    add_common(perf, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) ? 2 : 0;
    }

    try {
        if (!config_path.empty())
            apply_json(cfg, config_path);
        validate(cfg);
        kernels::force_backend("auto");

        if (app.got_subcommand(solve))
            return run_solve(cfg);
        if (app.got_subcommand(conv))
            return run_convergence(cfg);
        if (app.got_subcommand(infsup))
            return run_infsup(cfg);
        if (app.got_subcommand(spectral))
            return run_spectral(cfg);
        if (app.got_subcommand(condtable))
            return run_condtable(cfg, ps);
        if (app.got_subcommand(perf))
            return run_perf(cfg);
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
