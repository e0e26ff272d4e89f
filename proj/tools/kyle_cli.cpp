// kyle: command-line front end for the insider-trading equilibrium library.

#include "kyle/equilibrium.hpp"
#include "kyle/frontier.hpp"
#include "kyle/gaussian.hpp"
#include "kyle/io.hpp"
#include "kyle/metrics.hpp"
#include "kyle/support_transform.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace kyle;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_check_failed = 1;
constexpr int exit_config = 2;
constexpr int exit_infeasible = 3;

std::string default_out_dir() {
    const char* env = std::getenv("KYLE_OUT_DIR");
    return env && *env ? env : "out";
}

fs::path prepare_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw io::ConfigError("cannot create output directory '" + dir.string() + "'");
    return dir;
}

void write_text(const fs::path& file, const std::string& text) {
    std::ofstream out(file, std::ios::binary);
    if (!out) throw io::ConfigError("cannot write '" + file.string() + "'");
    out << text;
}

void write_json(const fs::path& file, const json& j) { write_text(file, j.dump(2) + "\n"); }

void write_rows(const fs::path& file, const std::vector<std::string>& header,
                const std::vector<std::vector<double>>& rows) {
    std::ostringstream os;
    io::write_csv(os, header, rows);
    write_text(file, os.str());
}

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> g(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) g[i] = a + (b - a) * i / (n - 1);
    g.back() = b;
    return g;
}

std::vector<std::vector<double>> as_rows(const std::vector<std::pair<double, double>>& pts) {
    std::vector<std::vector<double>> rows;
    rows.reserve(pts.size());
    for (const auto& [a, b] : pts) rows.push_back({a, b});
    return rows;
}

SupportSpec parse_support(const std::string& text) {
    std::vector<double> vals;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            vals.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw io::ConfigError("--support expects a,b,c (got '" + text + "')");
        }
    }
    if (vals.size() != 3) throw io::ConfigError("--support expects a,b,c (got '" + text + "')");
    try {
        return SupportSpec(vals[0], vals[1], vals[2]);
    } catch (const std::invalid_argument& e) {
        throw io::ConfigError(e.what());
    }
}

json metrics_json(const Metrics& m) {
    return {{"G", m.G}, {"S", m.S}, {"PiN", m.PiN}, {"F", m.F}, {"absG", -m.G}};
}

json estimate_json(const Estimate& e) {
    return {{"mean", e.mean}, {"half_width", e.half_width}, {"lo", e.lo()}, {"hi", e.hi()}};
}

json check_json(const CheckResult& c) { return {{"name", c.name}, {"passed", c.passed}, {"worst", c.worst}}; }

// demand.csv and price.csv for a uniform-noise equilibrium.
void write_equilibrium(const fs::path& dir, const EquilibriumSolution& sol, int points) {
    const auto vs = linspace(-1.0, 1.0, points);
    write_rows(dir / "demand.csv", {"v", "X"}, as_rows(sol.schedule.sample(vs)));
    const double w = sol.price.half_width();
    const auto ds = linspace(-w - 0.25, w + 0.25, points);
    write_rows(dir / "price.csv", {"d", "P"}, as_rows(sol.price.sample(ds)));
}

void write_general_equilibrium(const fs::path& dir, const GeneralEquilibrium& ge, int points) {
    const auto& sp = ge.spec();
    const auto& sol = ge.normalized();
    std::vector<std::vector<double>> demand;
    for (const auto& [v0, x0] : sol.schedule.sample(linspace(-1.0, 1.0, points))) {
        demand.push_back({sp.phi_inverse(v0), sp.a * x0, v0, x0});
    }
    write_rows(dir / "demand.csv", {"v", "X", "v_normalized", "X_normalized"}, demand);
    std::vector<std::vector<double>> price;
    const double w = sol.price.half_width();
    for (const auto& [d0, p0] : sol.price.sample(linspace(-w - 0.25, w + 0.25, points))) {
        price.push_back({sp.a * d0, sp.phi_inverse(p0), d0, p0});
    }
    write_rows(dir / "price.csv", {"d", "P", "d_normalized", "P_normalized"}, price);
}

json support_json(const SupportSpec& sp) {
    return {{"a", sp.a}, {"b", sp.b}, {"c", sp.c}, {"m", sp.m()}, {"sigma", sp.sigma()}};
}

struct Common {
    std::string penalty;
    std::string out;
    std::string support;
};

struct SolveOpts {
    bool numeric = false;
    int v_points = 4001;
    int x_points = 4001;
    int sample_points = 2001;
};

int run_solve(const Common& c, const SolveOpts& o) {
    Penalty pen = io::parse_penalty(c.penalty);
    const fs::path dir = prepare_dir(c.out);
    std::optional<SupportSpec> sp;
    if (!c.support.empty()) sp = parse_support(c.support);
    const Penalty norm = sp ? normalize_penalty(pen, *sp) : pen;

    ArgmaxGrid grid;
    grid.v_points = o.v_points;
    grid.x_points = o.x_points;
    const auto sol = solve_equilibrium(norm, grid, o.numeric);
    const auto report = verify_equilibrium(sol);

    json meta = {
        {"penalty", io::penalty_to_json(pen)},
        {"x_M", sol.schedule.x_max()},
        {"solver", {{"analytic", sol.meta.analytic},
                    {"v_points", sol.meta.v_points},
                    {"x_points", sol.meta.x_points},
                    {"bracket_tol", sol.meta.bracket_tol}}},
        {"verification", {{"linearity", check_json(report.linearity)},
                          {"optimality", check_json(report.optimality)},
                          {"break_even", check_json(report.break_even)},
                          {"all_passed", report.all_passed()}}},
    };
    json knots = json::array();
    for (const auto& k : sol.schedule.knots()) knots.push_back({k.v, k.x_left, k.x_right});
    meta["knots"] = knots;

    if (sp) {
        const auto ge = denormalize_solution(sol, *sp);
        write_general_equilibrium(dir, ge, o.sample_points);
        meta["support"] = support_json(*sp);
        meta["normalized_penalty"] = io::penalty_to_json(norm);
        meta["x_M_original"] = sp->a * sol.schedule.x_max();
        const auto band = ge.no_trade_band();
        meta["no_trade_band"] = {band.first, band.second};
    } else {
        write_equilibrium(dir, sol, o.sample_points);
    }
    write_json(dir / "meta.json", meta);
    std::cout << "x_M = " << io::format_double(sol.schedule.x_max()) << "  (" << dir.string() << ")\n";
    return exit_ok;
}

struct McOpts {
    std::int64_t n = 0;
    std::uint64_t seed = 12345;
};

int run_metrics(const Common& c, const McOpts& o) {
    Penalty pen = io::parse_penalty(c.penalty);
    const fs::path dir = prepare_dir(c.out);
    std::optional<SupportSpec> sp;
    if (!c.support.empty()) sp = parse_support(c.support);
    const Penalty norm = sp ? normalize_penalty(pen, *sp) : pen;
    const auto sol = solve_equilibrium(norm);
    const auto m = compute_metrics(sol.schedule);

    json out = {{"penalty", io::penalty_to_json(pen)}, {"closed_form", metrics_json(m)}};
    if (sp) {
        out["support"] = support_json(*sp);
        out["normalized_penalty"] = io::penalty_to_json(norm);
        out["closed_form_original"] = metrics_json(denormalize_metrics(m, *sp));
    }
    if (o.n > 0) {
        const auto mc = monte_carlo_metrics(sol, o.n, o.seed);
        out["monte_carlo"] = {{"samples", mc.samples},
                              {"seed", mc.seed},
                              {"confidence", mc.confidence},
                              {"G", estimate_json(mc.G)},
                              {"S", estimate_json(mc.S)},
                              {"PiN", estimate_json(mc.PiN)},
                              {"F", estimate_json(mc.F)}};
    }
    write_json(dir / "metrics.json", out);
    std::cout << out.dump(2) << "\n";
    return exit_ok;
}

int run_mc_validate(const Common& c, const McOpts& o) {
    Penalty pen = io::parse_penalty(c.penalty);
    const fs::path dir = prepare_dir(c.out);
    const auto sol = solve_equilibrium(pen);
    const auto m = compute_metrics(sol.schedule);
    const auto mc = monte_carlo_metrics(sol, o.n, o.seed);

    json checks = json::object();
    bool ok = true;
    auto check = [&](const char* name, double closed, const Estimate& e) {
        const bool in = e.contains(closed);
        ok = ok && in;
        checks[name] = {{"closed_form", closed}, {"estimate", estimate_json(e)}, {"inside", in}};
        std::cout << name << ": closed " << io::format_double(closed) << "  CI [" << io::format_double(e.lo())
                  << ", " << io::format_double(e.hi()) << "]  " << (in ? "inside" : "OUTSIDE") << "\n";
    };
    check("G", m.G, mc.G);
    check("S", m.S, mc.S);
    check("PiN", m.PiN, mc.PiN);
    check("F", m.F, mc.F);
    write_json(dir / "mc_validate.json", {{"penalty", io::penalty_to_json(pen)},
                                          {"samples", mc.samples},
                                          {"seed", mc.seed},
                                          {"confidence", mc.confidence},
                                          {"checks", checks},
                                          {"all_inside", ok}});
    return ok ? exit_ok : exit_check_failed;
}

std::vector<std::vector<double>> frontier_rows(const std::vector<SurfacePoint>& pts) {
    std::vector<std::vector<double>> rows;
    rows.reserve(pts.size());
    for (const auto& p : pts) rows.push_back({p.G, p.S, p.v1, p.v2, p.F});
    return rows;
}

int run_frontier(const std::string& out, double fmin, int grid) {
    const fs::path dir = prepare_dir(out);
    const auto pts = fmin_efficient_frontier(fmin, grid);
    write_rows(dir / "frontier.csv", {"G", "S", "v1", "v2", "F"}, frontier_rows(pts));
    std::cout << pts.size() << " non-dominated points (" << (dir / "frontier.csv").string() << ")\n";
    return exit_ok;
}

int run_surface(const std::string& out, int grid) {
    const fs::path dir = prepare_dir(out);
    const auto pts = evaluate_surface(sample_index_set(grid));
    std::vector<std::vector<double>> rows;
    rows.reserve(pts.size());
    for (const auto& p : pts) rows.push_back({p.v1, p.v2, p.G, p.S, p.F});
    write_rows(dir / "surface.csv", {"v1", "v2", "G", "S", "F"}, rows);
    std::cout << pts.size() << " surface points (" << (dir / "surface.csv").string() << ")\n";
    return exit_ok;
}

struct GaussOpts {
    int grid_n = 801;
    double grid_l = 5.0;
    double damping = 0.5;
    double tol = 1e-6;
    int max_iter = 500;
};

json write_gaussian(const fs::path& dir, const Penalty& pen, const GaussOpts& o) {
    GaussianGrid grid{o.grid_n, o.grid_l};
    GaussianOptions opts;
    opts.damping = o.damping;
    opts.tol = o.tol;
    opts.max_iter = o.max_iter;
    const auto sol = gaussian_fixed_point(pen, grid, opts);
    std::vector<std::vector<double>> demand, price;
    for (std::size_t i = 0; i < sol.v.size(); ++i) demand.push_back({sol.v[i], sol.X[i], sol.Phat[i]});
    for (std::size_t k = 0; k < sol.d.size(); ++k) price.push_back({sol.d[k], sol.P[k]});
    write_rows(dir / "demand.csv", {"v", "X", "Phat_at_x"}, demand);
    write_rows(dir / "price.csv", {"d", "P"}, price);
    const auto gm = gaussian_metrics(sol);
    json meta = {{"penalty", io::penalty_to_json(pen)},
                 {"grid", {{"n", grid.n}, {"L", grid.L}, {"d_points", grid.d_points()}}},
                 {"damping", o.damping},
                 {"tol", o.tol},
                 {"max_iter", o.max_iter},
                 {"iterations", sol.iterations},
                 {"residual", sol.residual},
                 {"converged", sol.converged},
                 {"monotone", sol.monotone},
                 {"underflow", sol.underflow},
                 {"G", gm.G},
                 {"S", gm.S}};
    write_json(dir / "meta.json", meta);
    return meta;
}

int run_gaussian(const Common& c, const GaussOpts& o) {
    Penalty pen = io::parse_penalty(c.penalty);
    const fs::path dir = prepare_dir(c.out);
    const auto meta = write_gaussian(dir, pen, o);
    std::cout << "iterations " << meta["iterations"] << ", residual " << meta["residual"] << ", converged "
              << meta["converged"] << "\n";
    if (!meta["monotone"].get<bool>()) std::cerr << "warning: converged schedule is not monotone\n";
    return exit_ok;
}

// Data behind every figure, one directory each.
int run_figures(const std::string& out, int grid) {
    const fs::path root = prepare_dir(out);
    json manifest = json::object();
    auto add = [&](const std::string& name, const std::string& figure, const json& files, const json& params) {
        manifest[name] = {{"figure", figure}, {"files", files}, {"parameters", params}};
    };
    constexpr int points = 2001;

    struct Eq {
        const char* dir;
        const char* figure;
        Penalty pen;
    };
    for (const auto& e : {Eq{"uniform_quadratic", "Insider's demand and pricing under quadratic penalty",
                             Penalty::quadratic(0.125)},
                          Eq{"uniform_linear", "Insider's demand and pricing under linear penalty", Penalty::linear(0.3)},
                          Eq{"uniform_constant_above", "Insider's demand and pricing under constant penalty on large trades",
                             Penalty::constant_above(0.2, 0.1)}}) {
        const auto dir = prepare_dir(root / e.dir);
        const auto sol = solve_equilibrium(e.pen);
        write_equilibrium(dir, sol, points);
        add(e.dir, e.figure, {"demand.csv", "price.csv"}, io::penalty_to_json(e.pen));
    }

    {
        const double K = 0.3;
        const double c = std::sqrt(2.0 * K);
        const auto dir = prepare_dir(root / "optimal_class");
        const auto env = Penalty::optimal_canonical(K);
        std::vector<std::vector<double>> rows;
        for (double x : linspace(0.0, 1.0, points)) {
            rows.push_back({x, env(x), x > 0.0 ? K : 0.0, std::min(K, 2.0 * c * x)});
        }
        write_rows(dir / "penalties.csv", {"x", "lower_envelope", "constant_nonzero", "steep_then_flat"}, rows);
        add("optimal_class", "Some penalty functions in the optimal class", {"penalties.csv"},
            {{"K", K}, {"cutoff", c}});
    }

    {
        const auto dir = prepare_dir(root / "locus");
        auto sweep = [&](const std::string& file, const std::vector<double>& params, auto make) {
            std::vector<std::vector<double>> rows;
            for (double p : params) {
                const auto m = compute_metrics(solve_equilibrium(make(p)).schedule);
                rows.push_back({p, m.S, -m.G});
            }
            write_rows(dir / file, {"parameter", "S", "minus_G"}, rows);
        };
        sweep("optimal_constant_nonzero.csv", linspace(0.0, 0.5, 101), [](double K) { return Penalty::constant_nonzero(K); });
        sweep("quadratic.csv", linspace(0.0, 20.0, 201), [](double a) { return Penalty::quadratic(a); });
        sweep("linear.csv", linspace(0.0, 1.0, 101), [](double a) { return Penalty::linear(a); });
        // K^H = 1 exceeds any attainable profit, so trades never exceed x0.
        sweep("constant_large_trades.csv", linspace(0.0, 1.0, 101), [](double x0) { return Penalty::constant_above(1.0, x0); });
        std::vector<std::vector<double>> upper;
        for (double beta : linspace(0.0, 1.0, 101)) {
            const double S = (1.0 - beta / 3.0) / std::sqrt(3.0);
            upper.push_back({beta, S, -quadratic_upper_boundary(S)});
        }
        write_rows(dir / "quadratic_upper_boundary.csv", {"beta", "S", "minus_G"}, upper);
        add("locus", "Locus of (S,-G) for some penalty functions",
            {"optimal_constant_nonzero.csv", "quadratic.csv", "linear.csv", "constant_large_trades.csv",
             "quadratic_upper_boundary.csv"},
            {{"constant_large_trades_KH", 1.0}});
    }

    {
        const auto dir = prepare_dir(root / "fmin_frontiers");
        json files = json::array();
        for (double fmin : {0.0, 0.02, 0.05, 0.07}) {
            const auto pts = fmin_efficient_frontier(fmin, grid);
            std::ostringstream name;
            name << "frontier_fmin_" << fmin << ".csv";
            write_rows(dir / name.str(), {"G", "S", "v1", "v2", "F"}, frontier_rows(pts));
            files.push_back(name.str());
        }
        add("fmin_frontiers", "Efficient (|G|,S) frontiers under various constraints F >= F_min (columns v1, v2 give "
                              "the indices of the efficient demand schedules)",
            files, {{"grid", grid}, {"fmin", {0.0, 0.02, 0.05, 0.07}}});
        manifest["index_curves"] = {{"figure", "Indices (v1,v2) of the efficient demand functions"},
                                    {"files", files},
                                    {"see", "fmin_frontiers"}};
    }

    {
        const auto dir = prepare_dir(root / "price_patterns");
        const auto cut = solve_equilibrium(Penalty::surface(0.75, 0.75));
        const auto lin = solve_equilibrium(Penalty::surface(0.5, 0.75));
        write_rows(dir / "demand_v2_v2.csv", {"v", "X"}, as_rows(cut.schedule.sample(linspace(-1.0, 1.0, points))));
        write_rows(dir / "demand_v1_v2.csv", {"v", "X"}, as_rows(lin.schedule.sample(linspace(-1.0, 1.0, points))));
        write_rows(dir / "price_v2_v2.csv", {"d", "P"}, as_rows(cut.price.sample(linspace(-2.0, 2.0, points))));
        write_rows(dir / "price_v1_v2.csv", {"d", "P"}, as_rows(lin.price.sample(linspace(-2.0, 2.0, points))));
        add("price_patterns", "New patterns of price functions",
            {"demand_v2_v2.csv", "demand_v1_v2.csv", "price_v2_v2.csv", "price_v1_v2.csv"},
            {{"v1", 0.5}, {"v2", 0.75}});
    }

    const GaussOpts gauss;
    for (const auto& e : {Eq{"gaussian_quadratic", "IT demand and pricing under quadratic penalty, Gaussian case",
                             Penalty::quadratic(2.0)},
                          Eq{"gaussian_linear", "IT demand and pricing under linear penalty, Gaussian case",
                             Penalty::linear(2.0)},
                          Eq{"gaussian_constant_above", "IT demand and pricing under constant penalty, Gaussian case",
                             Penalty::constant_above(1.0, 0.5)}}) {
        const auto dir = prepare_dir(root / e.dir);
        write_gaussian(dir, e.pen, gauss);
        add(e.dir, e.figure, {"demand.csv", "price.csv", "meta.json"}, io::penalty_to_json(e.pen));
    }

    {
        const auto dir = prepare_dir(root / "gaussian_locus");
        GaussianGrid g{401, 5.0};
        auto sweep = [&](const std::string& file, const std::vector<double>& params, auto make) {
            std::vector<std::vector<double>> rows;
            for (double p : params) {
                const auto sol = gaussian_fixed_point(make(p), g);
                const auto m = gaussian_metrics(sol);
                rows.push_back({p, m.S, -m.G, sol.converged ? 1.0 : 0.0});
            }
            write_rows(dir / file, {"parameter", "S", "minus_G", "converged"}, rows);
        };
        sweep("constant_nonzero.csv", linspace(0.0, 2.0, 11), [](double K) { return Penalty::constant_nonzero(K); });
        sweep("quadratic.csv", linspace(0.0, 5.0, 11), [](double a) { return Penalty::quadratic(a); });
        sweep("linear.csv", linspace(0.0, 3.0, 11), [](double a) { return Penalty::linear(a); });
        sweep("constant_large_trades.csv", linspace(0.0, 3.0, 11),
              [](double x0) { return Penalty::constant_above(100.0, x0); });
        add("gaussian_locus", "Locus of (S,-G) for different penalty functions, Gaussian noise",
            {"constant_nonzero.csv", "quadratic.csv", "linear.csv", "constant_large_trades.csv"},
            {{"grid_n", g.n}, {"grid_L", g.L}, {"constant_large_trades_KH", 100.0}});
    }

    write_json(root / "manifest.json", manifest);
    std::cout << "figure data written to " << root.string() << "\n";
    return exit_ok;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Kyle insider-trading model with penalties: equilibria, regulator metrics and frontiers"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "kyle 1.0");

    Common common;
    common.out = default_out_dir();
    auto add_common = [&](CLI::App* sub, bool penalty, bool support) {
        if (penalty) {
            sub->add_option("-p,--penalty", common.penalty, "Penalty JSON (inline) or path to a JSON file")
                ->required();
        }
        sub->add_option("-o,--out", common.out, "Output directory (default: $KYLE_OUT_DIR or ./out)");
        if (support) sub->add_option("--support", common.support, "Original supports a,b,c: u~U(-a,a), v~U(b,c)");
    };

    SolveOpts solve_opts;
    auto* solve = app.add_subcommand("solve", "Solve the uniform-noise equilibrium; writes demand.csv, price.csv, meta.json");
    add_common(solve, true, true);
    solve->add_flag("--numeric", solve_opts.numeric, "Force the numeric argmax solver");
    solve->add_option("--v-points", solve_opts.v_points, "Numeric solver v grid")->check(CLI::Range(3, 1000000));
    solve->add_option("--x-points", solve_opts.x_points, "Numeric solver coarse x grid")->check(CLI::Range(3, 1000000));
    solve->add_option("--samples", solve_opts.sample_points, "Rows in the output CSVs")->check(CLI::Range(2, 10000000));

    McOpts mc_opts;
    auto* metrics = app.add_subcommand("metrics", "Closed-form G, S, PiN, F (optional Monte Carlo block); writes metrics.json");
    add_common(metrics, true, true);
    metrics->add_option("--mc", mc_opts.n, "Monte Carlo samples (0 = skip)")->check(CLI::NonNegativeNumber);
    metrics->add_option("--seed", mc_opts.seed, "Monte Carlo seed");

    McOpts val_opts;
    val_opts.n = 1000000;
    auto* mcv = app.add_subcommand("mc-validate", "Check closed forms against 99% Monte Carlo intervals (exit 1 on failure)");
    add_common(mcv, true, false);
    mcv->add_option("--n", val_opts.n, "Samples")->check(CLI::PositiveNumber);
    mcv->add_option("--seed", val_opts.seed, "Seed");

    double fmin = 0.0;
    int fgrid = 400;
    auto* frontier = app.add_subcommand("frontier", "F_min-constrained efficient frontier; writes frontier.csv");
    add_common(frontier, false, false);
    frontier->add_option("--fmin", fmin, "Minimum expected fine (at most 1/12)")->check(CLI::NonNegativeNumber);
    frontier->add_option("--grid", fgrid, "Grid points per axis of the index set")->check(CLI::Range(2, 20000));

    int sgrid = 400;
    auto* surface = app.add_subcommand("surface", "Sampled efficient surface (v1, v2, G, S, F); writes surface.csv");
    add_common(surface, false, false);
    surface->add_option("--grid", sgrid, "Grid points per axis of the index set")->check(CLI::Range(2, 20000));

    GaussOpts gauss_opts;
    auto* gauss = app.add_subcommand("gaussian", "Fixed-point solver under Gaussian noise; writes demand.csv, price.csv, meta.json");
    add_common(gauss, true, false);
    gauss->add_option("--grid-n", gauss_opts.grid_n, "Points per grid (odd)")->check(CLI::Range(5, 100001));
    gauss->add_option("--grid-l", gauss_opts.grid_l, "Truncation in standard deviations")->check(CLI::PositiveNumber);
    gauss->add_option("--damping", gauss_opts.damping, "Damping in (0, 1]")->check(CLI::Range(1e-9, 1.0));
    gauss->add_option("--tol", gauss_opts.tol, "Sup-norm tolerance on X")->check(CLI::PositiveNumber);
    gauss->add_option("--max-iter", gauss_opts.max_iter, "Iteration cap")->check(CLI::PositiveNumber);

    int figgrid = 400;
    auto* figures = app.add_subcommand("figures", "Data behind every figure, one directory each plus manifest.json");
    add_common(figures, false, false);
    figures->add_option("--grid", figgrid, "Index-set grid for the frontier figures")->check(CLI::Range(2, 20000));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_config;
    }

    try {
        if (*solve) return run_solve(common, solve_opts);
        if (*metrics) return run_metrics(common, mc_opts);
        if (*mcv) return run_mc_validate(common, val_opts);
        if (*frontier) return run_frontier(common.out, fmin, fgrid);
        if (*surface) return run_surface(common.out, sgrid);
        if (*gauss) {
            if (gauss_opts.grid_n % 2 == 0) throw io::ConfigError("--grid-n must be odd");
            return run_gaussian(common, gauss_opts);
        }
        if (*figures) return run_figures(common.out, figgrid);
    } catch (const InfeasibleConstraint& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return exit_infeasible;
    } catch (const io::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return exit_config;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return exit_config;
    } catch (const std::domain_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return exit_config;
    }
    return exit_config;
}
