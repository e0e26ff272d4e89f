#include "kyle/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace kyle {

namespace {

void check_grid(const GaussianGrid& g) {
    if (g.n < 5 || g.n % 2 == 0) throw std::invalid_argument("gaussian grid: n must be odd and >= 5");
    if (!(g.L > 0.0)) throw std::invalid_argument("gaussian grid: L must be > 0");
}

double trap_weight(int i, int n) { return (i == 0 || i == n - 1) ? 0.5 : 1.0; }

struct Objective {
    const std::vector<double>& xs;
    const std::vector<double>& phat;
    const Penalty& penalty;
    double h;
    double L;

    double phat_at(double x) const {
        const double t = std::clamp((x + L) / h, 0.0, static_cast<double>(xs.size() - 1));
        const auto j = std::min(static_cast<std::size_t>(t), xs.size() - 2);
        const double w = t - static_cast<double>(j);
        return (1.0 - w) * phat[j] + w * phat[j + 1];
    }

    double on_grid(std::size_t j, double v) const {
        return xs[j] * (v - phat[j]) - penalty.evaluate_unbounded(xs[j]);
    }

    double off_grid(double x, double v) const { return x * (v - phat_at(x)) - penalty.evaluate_unbounded(x); }
};

// With Phat linear on each grid cell, the objective is an exact parabola on
// every cell (split at penalty breakpoints), so the local maximum is found in
// closed form rather than by a fit that depends on the winning grid index.
double best_response_at(const Objective& f, const std::vector<double>& bps, double v) {
    constexpr double tie_tol = 1e-12;
    const std::size_t n = f.xs.size();

    std::vector<double> vals(n);
    double top = -INFINITY;
    for (std::size_t j = 0; j < n; ++j) {
        vals[j] = f.on_grid(j, v);
        top = std::max(top, vals[j]);
    }

    double x_best = 0.0;
    double f_best = -INFINITY;
    auto offer = [&](double x, double fx) {
        if (fx > f_best + tie_tol || (fx >= f_best - tie_tol && std::abs(x) < std::abs(x_best))) {
            x_best = x;
            f_best = std::max(f_best, fx);
        }
    };
    auto refine = [&](double a, double b) {
        const double m = 0.5 * (a + b);
        const double fa = f.off_grid(a, v);
        const double fm = f.off_grid(m, v);
        const double fb = f.off_grid(b, v);
        const double den = fa - 2.0 * fm + fb;
        if (den < 0.0) {
            const double x = std::clamp(m + 0.25 * (b - a) * (fa - fb) / den, a, b);
            offer(x, f.off_grid(x, v));
        }
    };

    for (std::size_t j = 0; j < n; ++j) {
        if (vals[j] < top - 1e-6) continue;
        offer(f.xs[j], vals[j]);
        for (std::size_t c = (j > 0 ? j - 1 : 0); c < std::min(j + 1, n - 1); ++c) {
            // Cell [x_c, x_{c+1}], cut at any breakpoint inside it.
            double a = f.xs[c];
            const double b = f.xs[c + 1];
            for (double bp : bps) {
                if (bp > a && bp < b) {
                    refine(a, bp);
                    a = bp;
                }
            }
            refine(a, b);
        }
    }
    for (double b : bps) offer(b, f.off_grid(b, v));
    return x_best;
}

} // namespace

std::vector<double> GaussianGrid::v_grid() const {
    std::vector<double> g(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) g[i] = -L + i * h();
    g[(n - 1) / 2] = 0.0;
    g.back() = L;
    return g;
}

std::vector<double> GaussianGrid::d_grid() const {
    const int m = d_points();
    std::vector<double> g(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) g[i] = -2.0 * L + i * h();
    g[(m - 1) / 2] = 0.0;
    g.back() = 2.0 * L;
    return g;
}

PriceUpdate gaussian_price_update(const std::vector<double>& X, const GaussianGrid& grid, Execution exec) {
    check_grid(grid);
    if (X.size() != static_cast<std::size_t>(grid.n)) throw std::invalid_argument("price update: X size mismatch");
    const auto vs = grid.v_grid();
    const auto ds = grid.d_grid();
    const int n = grid.n;
    const auto m = static_cast<std::int64_t>(ds.size());
    PriceUpdate out;
    out.P.assign(ds.size(), 0.0);
    std::vector<char> under(ds.size(), 0);

    auto one = [&](std::int64_t k) {
        const double d = ds[k];
        double top = -INFINITY;
        for (int i = 0; i < n; ++i) {
            const double r = d - X[i];
            top = std::max(top, -0.5 * (r * r + vs[i] * vs[i]));
        }
        double num = 0.0;
        double den = 0.0;
        for (int i = 0; i < n; ++i) {
            const double r = d - X[i];
            const double w = trap_weight(i, n) * std::exp(-0.5 * (r * r + vs[i] * vs[i]) - top);
            num += vs[i] * w;
            den += w;
        }
        out.P[k] = num / den;
        under[k] = top < -745.0;
    };
    if (exec == Execution::parallel) {
#pragma omp parallel for schedule(static)
        for (std::int64_t k = 0; k < m; ++k) one(k);
    } else {
        for (std::int64_t k = 0; k < m; ++k) one(k);
    }
    out.underflow = std::any_of(under.begin(), under.end(), [](char c) { return c != 0; });
    return out;
}

std::vector<double> gaussian_expected_price(const std::vector<double>& P, const GaussianGrid& grid) {
    check_grid(grid);
    if (P.size() != static_cast<std::size_t>(grid.d_points())) {
        throw std::invalid_argument("expected price: P size mismatch");
    }
    const int n = grid.n;
    const auto us = grid.v_grid();
    std::vector<double> w(static_cast<std::size_t>(n));
    double mass = 0.0;
    for (int i = 0; i < n; ++i) {
        w[i] = trap_weight(i, n) * std::exp(-0.5 * us[i] * us[i]);
        mass += w[i];
    }
    std::vector<double> phat(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int i = 0; i < n; ++i) s += w[i] * P[i + j]; // d = x_j + u_i
        phat[j] = s / mass;
    }
    return phat;
}

std::vector<double> gaussian_best_response(const std::vector<double>& P, const Penalty& penalty,
                                           const GaussianGrid& grid, Execution exec) {
    const auto phat = gaussian_expected_price(P, grid);
    const auto xs = grid.x_grid();
    const auto vs = grid.v_grid();
    std::vector<double> bps;
    for (double b : penalty.breakpoints()) {
        if (b < grid.L) {
            bps.push_back(b);
            bps.push_back(-b);
        }
    }
    std::sort(bps.begin(), bps.end());
    const Objective f{xs, phat, penalty, grid.h(), grid.L};
    std::vector<double> X(vs.size());
    const auto n = static_cast<std::int64_t>(vs.size());
    if (exec == Execution::parallel) {
#pragma omp parallel for schedule(dynamic, 8)
        for (std::int64_t i = 0; i < n; ++i) X[i] = best_response_at(f, bps, vs[i]);
    } else {
        for (std::int64_t i = 0; i < n; ++i) X[i] = best_response_at(f, bps, vs[i]);
    }
    return X;
}

GaussianSolution gaussian_fixed_point(const Penalty& penalty, const GaussianGrid& grid,
                                      const GaussianOptions& opts, Execution exec) {
    check_grid(grid);
    if (!(opts.damping > 0.0 && opts.damping <= 1.0)) throw std::invalid_argument("damping must lie in (0, 1]");
    if (!(opts.tol > 0.0)) throw std::invalid_argument("tol must be > 0");
    if (opts.max_iter < 1) throw std::invalid_argument("max_iter must be >= 1");

    GaussianSolution sol;
    sol.grid = grid;
    sol.v = grid.v_grid();
    sol.d = grid.d_grid();
    const std::size_t n = sol.v.size();

    auto symmetrize = [n](std::vector<double>& x) {
        for (std::size_t i = 0; i < n / 2; ++i) {
            const double s = 0.5 * (x[i] - x[n - 1 - i]);
            x[i] = s;
            x[n - 1 - i] = -s;
        }
        x[n / 2] = 0.0;
    };

    if (opts.initial) {
        if (opts.initial->size() != n) throw std::invalid_argument("initial schedule size mismatch");
        sol.X = *opts.initial;
    } else {
        std::vector<double> linear(sol.d.size());
        for (std::size_t k = 0; k < sol.d.size(); ++k) linear[k] = 0.5 * sol.d[k];
        sol.X = gaussian_best_response(linear, penalty, grid, exec);
    }
    symmetrize(sol.X);

    const double lam = opts.damping;
    for (int it = 1; it <= opts.max_iter; ++it) {
        const auto upd = gaussian_price_update(sol.X, grid, exec);
        sol.underflow = sol.underflow || upd.underflow;
        auto next = gaussian_best_response(upd.P, penalty, grid, exec);
        symmetrize(next);
        double res = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double x = (1.0 - lam) * sol.X[i] + lam * next[i];
            res = std::max(res, std::abs(x - sol.X[i]));
            sol.X[i] = x;
        }
        sol.iterations = it;
        sol.residual = res;
        if (res < opts.tol) {
            sol.converged = true;
            break;
        }
    }

    const auto upd = gaussian_price_update(sol.X, grid, exec);
    sol.P = upd.P;
    sol.underflow = sol.underflow || upd.underflow;
    sol.Phat = gaussian_expected_price(sol.P, grid);
    for (std::size_t i = 1; i < n; ++i) {
        if (sol.X[i] < sol.X[i - 1] - 10.0 * opts.tol) sol.monotone = false;
    }
    return sol;
}

GaussianMetrics gaussian_metrics(const GaussianSolution& sol) {
    const auto& g = sol.grid;
    const int n = g.n;
    const double h = g.h();
    const auto& vs = sol.v;
    const auto& ds = sol.d;
    const int m = static_cast<int>(ds.size());
    const double norm = 1.0 / std::sqrt(2.0 * M_PI);

    GaussianMetrics out;
    for (int k = 0; k < m; ++k) {
        double w0 = 0.0, w1 = 0.0, w2 = 0.0;
        for (int i = 0; i < n; ++i) {
            const double r = ds[k] - sol.X[i];
            const double w = trap_weight(i, n) * std::exp(-0.5 * (r * r + vs[i] * vs[i]));
            w0 += w;
            w1 += w * vs[i];
            w2 += w * vs[i] * vs[i];
        }
        if (w0 <= 0.0) continue;
        const double mean = w1 / w0;
        const double var = std::max(w2 / w0 - mean * mean, 0.0);
        const double density = h * w0 * norm * norm;
        out.S += trap_weight(k, m) * h * density * std::sqrt(var);
    }

    // P at d = X(v) + u, linear between d-grid nodes and held beyond them.
    auto price_at = [&](double d) {
        const double t = std::clamp((d - ds.front()) / h, 0.0, static_cast<double>(m - 1));
        const int j = std::min(static_cast<int>(t), m - 2);
        const double w = t - j;
        return (1.0 - w) * sol.P[j] + w * sol.P[j + 1];
    };
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        const double wi = trap_weight(i, n) * std::exp(-0.5 * vs[i] * vs[i]);
        for (int j = 0; j < n; ++j) {
            const double u = vs[j];
            sum += wi * trap_weight(j, n) * std::exp(-0.5 * u * u) * u * price_at(sol.X[i] + u);
        }
    }
    out.G = -sum * h * h * norm * norm;
    return out;
}

} // namespace kyle
