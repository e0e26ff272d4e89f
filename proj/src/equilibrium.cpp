#include "kyle/equilibrium.hpp"

#include "rng.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace kyle {

double insider_profit(const Penalty& penalty, double x, double v) {
    return x * (v - 0.5 * x) - penalty.evaluate(x);
}

namespace {

struct Candidate {
    double x;
    double profit;
};

// Maximises f over the open interval (a, b) assuming unimodality there.
template <class F>
Candidate golden_section_max(F&& f, double a, double b, double tol) {
    constexpr double inv_phi = 0.6180339887498949;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c);
    double fd = f(d);
    while (b - a > tol) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    const double x = 0.5 * (a + b);
    return {x, f(x)};
}

// Best point of f on [a, b] inside the smooth piece [pa, pb]. Golden section
// brackets the maximum; a parabola through three points spread over the whole
// piece then lands exactly on it whenever f is quadratic there, which holds
// for every built-in family.
template <class F>
Candidate piece_max(F&& f, double a, double b, double pa, double pb, double tol) {
    Candidate best = golden_section_max(f, a, b, tol);
    const double s = 0.25 * (pb - pa);
    const double x1 = pa + 2.0 * s;
    const double f0 = f(x1 - s);
    const double f1 = f(x1);
    const double f2 = f(x1 + s);
    const double den = f0 - 2.0 * f1 + f2;
    if (den < 0.0) {
        const double x = std::clamp(x1 + s * 0.5 * (f0 - f2) / den, a, b);
        const double fx = f(x);
        if (fx >= best.profit - 1e-15 * (1.0 + std::abs(fx))) best = {x, fx};
    }
    return best;
}

double best_response_nonneg(const Penalty& penalty, double v, const ArgmaxGrid& g,
                            std::span<const double> breakpoints) {
    auto profit = [&](double x) { return insider_profit(penalty, x, v); };
    const int n = g.x_points;
    const double h = 1.0 / (n - 1);

    std::vector<Candidate> cands;
    cands.reserve(16);
    cands.push_back({0.0, profit(0.0)});
    for (double b : breakpoints) {
        cands.push_back({b, profit(b)});
    }

    // Coarse pass: refine every local maximum close to the best grid value.
    std::vector<double> coarse(static_cast<std::size_t>(n));
    double best = -INFINITY;
    for (int j = 0; j < n; ++j) {
        coarse[j] = profit(j * h);
        best = std::max(best, coarse[j]);
    }
    for (int j = 0; j < n; ++j) {
        const double pj = coarse[j];
        if (pj < best - g.plateau_tol) continue;
        if (j > 0 && coarse[j - 1] >= pj) continue; // also skips plateau interiors
        if (j + 1 < n && coarse[j + 1] > pj) continue;

        const double lo = std::max(0.0, (j - 1) * h);
        const double hi = std::min(1.0, (j + 1) * h);
        // Split [lo, hi] at breakpoints; each part lies in one smooth piece.
        std::vector<double> cuts{lo};
        for (double b : breakpoints) {
            if (b > lo && b < hi) cuts.push_back(b);
        }
        cuts.push_back(hi);
        for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
            const double a = cuts[k];
            const double b = cuts[k + 1];
            double pa = 0.0;
            double pb = 1.0;
            for (double bp : breakpoints) {
                if (bp <= a) pa = bp;
                if (bp >= b) {
                    pb = std::min(pb, bp);
                    break;
                }
            }
            cands.push_back(piece_max(profit, a, b, pa, pb, g.bracket_tol));
        }
    }

    double top = -INFINITY;
    for (const auto& c : cands) top = std::max(top, c.profit);
    double x_best = INFINITY;
    for (const auto& c : cands) {
        if (c.profit >= top - g.tie_tol) x_best = std::min(x_best, c.x);
    }
    return x_best;
}

std::vector<double> unit_breakpoints(const Penalty& penalty) {
    std::vector<double> bps;
    for (double b : penalty.breakpoints()) {
        if (b > 0.0 && b <= 1.0) bps.push_back(b);
    }
    return bps;
}

void argmax_sweep_serial(const Penalty& penalty, const ArgmaxGrid& g, std::span<const double> bps,
                         std::span<const double> vs, std::span<double> out) {
    for (std::size_t i = 0; i < vs.size(); ++i) {
        out[i] = best_response_nonneg(penalty, vs[i], g, bps);
    }
}

void argmax_sweep_omp(const Penalty& penalty, const ArgmaxGrid& g, std::span<const double> bps,
                      std::span<const double> vs, std::span<double> out) {
    const auto n = static_cast<std::int64_t>(vs.size());
#pragma omp parallel for schedule(dynamic, 16)
    for (std::int64_t i = 0; i < n; ++i) {
        out[i] = best_response_nonneg(penalty, vs[i], g, bps);
    }
}

// Drops interior knots (without jumps) that lie on the chord between their
// kept neighbours.
std::vector<Knot> merge_collinear(const std::vector<Knot>& in, double tol) {
    if (in.size() <= 2) return in;
    std::vector<Knot> out{in.front()};
    std::size_t anchor = 0;
    std::size_t k = 1;
    while (k + 1 < in.size()) {
        const Knot& cur = in[k];
        bool removable = cur.x_left == cur.x_right;
        if (removable) {
            const Knot& a = in[anchor];
            const Knot& nx = in[k + 1];
            for (std::size_t m = anchor + 1; m <= k && removable; ++m) {
                const double w = (in[m].v - a.v) / (nx.v - a.v);
                const double line = a.x_right + w * (nx.x_left - a.x_right);
                removable = std::abs(in[m].x_left - line) <= tol;
            }
        }
        if (!removable) {
            out.push_back(cur);
            anchor = k;
        }
        ++k;
    }
    out.push_back(in.back());
    return out;
}

} // namespace

double best_response(const Penalty& penalty, double v, const ArgmaxGrid& grid) {
    if (!(std::abs(v) <= 1.0)) throw std::domain_error("best_response: |v| must be <= 1");
    const auto bps = unit_breakpoints(penalty);
    if (v < 0.0) return -best_response_nonneg(penalty, -v, grid, bps);
    return best_response_nonneg(penalty, v, grid, bps);
}

std::optional<DemandSchedule> solve_demand_analytic(const Penalty& penalty) {
    using namespace penalty_kind;
    const auto& s = penalty.spec();
    if (std::holds_alternative<Zero>(s)) {
        return DemandSchedule::identity();
    }
    if (const auto* p = std::get_if<Quadratic>(&s)) {
        return DemandSchedule::proportional(1.0 / (1.0 + 2.0 * p->alpha));
    }
    if (const auto* p = std::get_if<Linear>(&s)) {
        if (p->alpha >= 1.0) return DemandSchedule::zero();
        if (p->alpha == 0.0) return DemandSchedule::identity();
        return DemandSchedule({{0.0, 0.0, 0.0}, {p->alpha, 0.0, 0.0}, {1.0, 1.0 - p->alpha, 1.0 - p->alpha}});
    }
    if (const auto* p = std::get_if<ConstantNonzero>(&s)) {
        return DemandSchedule::cutoff(std::sqrt(2.0 * p->K));
    }
    if (const auto* p = std::get_if<OptimalCanonical>(&s)) {
        return DemandSchedule::cutoff(std::sqrt(2.0 * p->K));
    }
    if (const auto* p = std::get_if<ConstantAbove>(&s)) {
        if (p->x0 == 0.0) return DemandSchedule::cutoff(std::sqrt(2.0 * p->K));
        if (p->x0 >= 1.0 || p->K == 0.0) return DemandSchedule::identity();
        // Blocked at x0 until (v - x0)^2 / 2 = K, then back to X(v) = v.
        const double v_switch = p->x0 + std::sqrt(2.0 * p->K);
        if (v_switch >= 1.0) {
            return DemandSchedule({{0.0, 0.0, 0.0}, {p->x0, p->x0, p->x0}, {1.0, p->x0, p->x0}});
        }
        return DemandSchedule(
            {{0.0, 0.0, 0.0}, {p->x0, p->x0, p->x0}, {v_switch, p->x0, v_switch}, {1.0, 1.0, 1.0}});
    }
    if (const auto* p = std::get_if<Surface>(&s)) {
        const double v1 = p->v1;
        const double v2 = p->v2;
        if (v1 == 0.0) return DemandSchedule::identity();
        if (v2 > 1.0 || v1 > v2) return std::nullopt;
        if (v1 == v2) return DemandSchedule::cutoff(v1);
        std::vector<Knot> knots{{0.0, 0.0, 0.0}, {v1, 0.0, 0.0}};
        if (v2 < 1.0) {
            knots.push_back({v2, v2, v2});
        }
        knots.push_back({1.0, 1.0, 1.0});
        return DemandSchedule(std::move(knots));
    }
    return std::nullopt;
}

DemandSchedule solve_demand_numeric(const Penalty& penalty, const ArgmaxGrid& grid, Execution exec) {
    if (grid.v_points < 3 || grid.x_points < 3) throw std::invalid_argument("argmax grid too small");
    const auto bps = unit_breakpoints(penalty);
    const int n = grid.v_points;
    const double h = 1.0 / (n - 1);

    std::vector<double> vs(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) vs[i] = i * h;
    vs.back() = 1.0;
    std::vector<double> xs(vs.size());
    if (exec == Execution::parallel) {
        argmax_sweep_omp(penalty, grid, bps, vs, xs);
    } else {
        argmax_sweep_serial(penalty, grid, bps, vs, xs);
    }

    for (int i = 1; i < n; ++i) {
        if (xs[i] < xs[i - 1] - grid.monotone_tol) {
            throw std::logic_error("monotonicity violation");
        }
        xs[i] = std::max(xs[i], xs[i - 1]);
    }

    auto br = [&](double v) { return best_response_nonneg(penalty, v, grid, bps); };
    const double jump_tol = grid.jump_factor * h;
    std::vector<Knot> knots{{0.0, 0.0, xs[0]}};
    for (int i = 1; i < n; ++i) {
        if (xs[i] - xs[i - 1] > jump_tol) {
            double lo = vs[i - 1];
            double hi = vs[i];
            const double mid_level = 0.5 * (xs[i - 1] + xs[i]);
            for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
                const double mid = 0.5 * (lo + hi);
                if (mid <= lo || mid >= hi) break;
                if (br(mid) <= mid_level) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            // Near a degenerate tie the maximisers at lo and hi can sit anywhere on a
            // flat profit ridge. Fit each side's linear piece away from the jump and put
            // the jump where both continuations earn the same profit.
            const double delta = 0.01 * h;
            double x_left = br(lo);
            double x_right = br(hi);
            if (lo - 2.0 * delta >= vs[i - 1] - 0.05 * h && lo - 2.0 * delta >= 0.0 && hi + 2.0 * delta <= 1.0) {
                const double l1 = br(lo - delta), l2 = br(lo - 2.0 * delta);
                const double r1 = br(hi + delta), r2 = br(hi + 2.0 * delta);
                auto left_line = [&](double v) { return l1 + (l1 - l2) * (v - (lo - delta)) / delta; };
                auto right_line = [&](double v) { return r1 + (r2 - r1) * (v - (hi + delta)) / delta; };
                auto gain = [&](double v) {
                    return insider_profit(penalty, std::clamp(right_line(v), 0.0, 1.0), v) -
                           insider_profit(penalty, std::clamp(left_line(v), 0.0, 1.0), v);
                };
                double a = lo - delta, b = hi + delta;
                if (gain(a) <= 0.0 && gain(b) > 0.0) {
                    for (int it = 0; it < 200; ++it) {
                        const double m = 0.5 * (a + b);
                        if (m <= a || m >= b) break;
                        (gain(m) > 0.0 ? b : a) = m;
                    }
                    lo = a;
                    x_left = std::clamp(left_line(lo), 0.0, 1.0);
                    x_right = std::clamp(right_line(lo), 0.0, 1.0);
                }
            }
            x_left = std::max(x_left, knots.back().x_right);
            x_right = std::max(x_right, x_left);
            if (knots.back().v == lo) {
                knots.back().x_right = x_right;
            } else {
                knots.push_back({lo, x_left, x_right});
            }
        }
        const double xi = std::max(xs[i], knots.back().x_right);
        knots.push_back({vs[i], xi, xi});
    }
    return DemandSchedule(merge_collinear(knots, 1e-12));
}

PriceFunction::PriceFunction(DemandSchedule schedule) : schedule_(std::move(schedule)) {
    const double w = half_width();
    breakpoints_.push_back(-w);
    breakpoints_.push_back(w);
    for (double y : schedule_.levels()) {
        for (double z : {y - 1.0, y + 1.0, -y - 1.0, -y + 1.0}) {
            if (z > -w && z < w) breakpoints_.push_back(z);
        }
    }
    std::sort(breakpoints_.begin(), breakpoints_.end());
    breakpoints_.erase(std::unique(breakpoints_.begin(), breakpoints_.end()), breakpoints_.end());
}

std::pair<double, double> PriceFunction::posterior_interval(double d) const {
    const double xm = schedule_.x_max();
    const double lo = schedule_.inverse_left(std::clamp(d - 1.0, -xm, xm));
    const double hi = schedule_.inverse_right(std::clamp(d + 1.0, -xm, xm));
    return {lo, hi};
}

double PriceFunction::evaluate(double d) const {
    const double w = half_width();
    if (d > w) return 1.0;
    if (d < -w) return -1.0;
    const auto [lo, hi] = posterior_interval(d);
    return 0.5 * (lo + hi);
}

std::vector<std::pair<double, double>> PriceFunction::sample(std::span<const double> grid) const {
    std::vector<std::pair<double, double>> rows;
    if (grid.empty()) return rows;
    std::vector<double> ds(grid.begin(), grid.end());
    for (double b : breakpoints_) {
        if (b >= grid.front() && b <= grid.back()) ds.push_back(b);
    }
    std::sort(ds.begin(), ds.end());
    ds.erase(std::unique(ds.begin(), ds.end()), ds.end());

    // One-sided limits at breakpoints by linear extrapolation inside the
    // adjacent piece (P is linear between breakpoints).
    auto one_sided = [&](double b, double neighbour) {
        const double p1 = evaluate(b + 0.25 * (neighbour - b));
        const double p2 = evaluate(b + 0.5 * (neighbour - b));
        return 2.0 * p1 - p2;
    };
    for (double d : ds) {
        const double p = evaluate(d);
        auto it = std::lower_bound(breakpoints_.begin(), breakpoints_.end(), d);
        if (it == breakpoints_.end() || *it != d) {
            rows.emplace_back(d, p);
            continue;
        }
        const double left_nb = it == breakpoints_.begin() ? d - 1.0 : *(it - 1);
        const double right_nb = (it + 1) == breakpoints_.end() ? d + 1.0 : *(it + 1);
        const double left = one_sided(d, left_nb);
        const double right = one_sided(d, right_nb);
        if (std::abs(left - p) > 1e-12) rows.emplace_back(d, left);
        rows.emplace_back(d, p);
        if (std::abs(right - p) > 1e-12) rows.emplace_back(d, right);
    }
    return rows;
}

PriceFunction price_function(const DemandSchedule& schedule) { return PriceFunction(schedule); }

double expected_price(const PriceFunction& price, double x) {
    if (!(std::abs(x) <= 1.0)) throw std::domain_error("expected_price: |x| must be <= 1");
    const double lo = x - 1.0;
    const double hi = x + 1.0;
    const auto& bps = price.breakpoints();
    // P is linear on each open interval between breakpoints, so the midpoint
    // rule integrates it exactly.
    double sum = 0.0;
    double a = lo;
    for (auto it = std::upper_bound(bps.begin(), bps.end(), lo); it != bps.end() && *it < hi; ++it) {
        sum += (*it - a) * price(0.5 * (a + *it));
        a = *it;
    }
    sum += (hi - a) * price(0.5 * (a + hi));
    return 0.5 * sum;
}

EquilibriumSolution make_solution(const Penalty& penalty, DemandSchedule schedule) {
    PriceFunction price(schedule);
    return EquilibriumSolution{penalty, std::move(schedule), std::move(price), SolverMeta{}};
}

EquilibriumSolution solve_equilibrium(const Penalty& penalty, const ArgmaxGrid& grid, bool force_numeric,
                                      Execution exec) {
    if (!force_numeric) {
        if (auto x = solve_demand_analytic(penalty)) {
            auto sol = make_solution(penalty, std::move(*x));
            sol.meta.analytic = true;
            return sol;
        }
    }
    auto sol = make_solution(penalty, solve_demand_numeric(penalty, grid, exec));
    sol.meta = SolverMeta{false, grid.v_points, grid.x_points, grid.bracket_tol};
    return sol;
}

VerificationReport verify_equilibrium(const EquilibriumSolution& sol, const VerifyOptions& opts) {
    VerificationReport rep;
    auto eng = detail::partition_engine(opts.seed, 0);

    rep.linearity.name = "expected-price linearity";
    for (int i = 0; i < opts.probes; ++i) {
        const double x = detail::uniform(eng, -1.0, 1.0);
        rep.linearity.worst = std::max(rep.linearity.worst, std::abs(expected_price(sol.price, x) - 0.5 * x));
    }
    rep.linearity.passed = rep.linearity.worst <= opts.tol;

    rep.optimality.name = "insider optimality";
    std::vector<double> xs;
    const int m = opts.x_grid_points;
    for (int j = 0; j < m; ++j) xs.push_back(-1.0 + 2.0 * j / (m - 1));
    for (double b : unit_breakpoints(sol.penalty)) {
        xs.push_back(b);
        xs.push_back(-b);
    }
    for (int i = 0; i < opts.probes; ++i) {
        const double v = detail::uniform(eng, -1.0, 1.0);
        const double chosen = insider_profit(sol.penalty, sol.schedule(v), v);
        double best = chosen;
        for (double x : xs) best = std::max(best, insider_profit(sol.penalty, x, v));
        rep.optimality.worst = std::max(rep.optimality.worst, best - chosen);
    }
    rep.optimality.passed = rep.optimality.worst <= opts.tol;

    // E[v - P(d) | d in bucket] = 0 for every bucket.
    rep.break_even.name = "market-maker break-even";
    const int nb = opts.mc_buckets;
    const double w = sol.price.half_width();
    std::vector<double> sum(nb, 0.0), sumsq(nb, 0.0);
    std::vector<std::int64_t> cnt(nb, 0);
    auto mc = detail::partition_engine(opts.seed, 1);
    for (std::int64_t s = 0; s < opts.mc_samples; ++s) {
        const double v = detail::uniform(mc, -1.0, 1.0);
        const double u = detail::uniform(mc, -1.0, 1.0);
        const double d = sol.schedule(v) + u;
        const double r = v - sol.price(d);
        const int b = std::clamp(static_cast<int>((d + w) / (2.0 * w) * nb), 0, nb - 1);
        sum[b] += r;
        sumsq[b] += r * r;
        ++cnt[b];
    }
    for (int b = 0; b < nb; ++b) {
        if (cnt[b] < 30) continue;
        const double n = static_cast<double>(cnt[b]);
        const double mean = sum[b] / n;
        const double var = std::max(sumsq[b] / n - mean * mean, 0.0) * n / (n - 1.0);
        const double se = std::sqrt(var / n);
        const double z = se > 0.0 ? std::abs(mean) / se : (mean == 0.0 ? 0.0 : INFINITY);
        rep.break_even.worst = std::max(rep.break_even.worst, z);
    }
    rep.break_even.passed = rep.break_even.worst <= opts.mc_z;
    return rep;
}

} // namespace kyle
