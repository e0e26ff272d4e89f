// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on failure.

#include "kyle/equilibrium.hpp"
#include "kyle/frontier.hpp"
#include "kyle/gaussian.hpp"
#include "kyle/metrics.hpp"
#include "kyle/support_transform.hpp"
#include "oracles.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

using namespace kyle;

namespace {

const double kRoot3 = std::sqrt(3.0);

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << " [failed: " << what << "]";
        }
    }
};

int failures = 0;

void criterion(int id, const char* name, double budget_s, const std::function<void(Outcome&)>& body) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        body(o);
    } catch (const std::exception& e) {
        o.require(false, std::string("exception: ") + e.what());
    }
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (budget_s > 0.0 && dt > budget_s) {
        std::ostringstream os;
        os << "runtime " << dt << " s over " << budget_s << " s";
        o.require(false, os.str());
    }
    std::printf("%s %2d %s (%.2f s)%s\n", o.pass ? "PASS" : "FAIL", id, name, dt, o.detail.str().c_str());
    std::fflush(stdout);
    failures += o.pass ? 0 : 1;
}

double max_abs_diff_on_grid(const std::function<double(double)>& f, const std::function<double(double)>& g,
                            double lo, double hi, int n) {
    double e = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = lo + (hi - lo) * i / (n - 1);
        e = std::max(e, std::abs(f(x) - g(x)));
    }
    return e;
}

} // namespace

int main() {
    criterion(1, "mimicking benchmark: C=0 gives X(v)=v and P(d)=d/2", 1.0, [](Outcome& o) {
        const auto ana = *solve_demand_analytic(Penalty::zero());
        const auto num = solve_demand_numeric(Penalty::zero());
        const double e_ana = sup_distance(ana, DemandSchedule::identity());
        const double e_num = sup_distance(num, DemandSchedule::identity());
        const auto P = price_function(num);
        const double e_price = max_abs_diff_on_grid([&](double d) { return P(d); },
                                                    [](double d) { return 0.5 * d; }, -2.0, 2.0, 4001);
        o.detail << " analytic=" << e_ana << " numeric=" << e_num << " price=" << e_price;
        o.require(e_ana == 0.0, "analytic schedule exact");
        o.require(e_num < 1e-6, "numeric sup-error < 1e-6");
        o.require(e_price < 1e-6, "price sup-error < 1e-6");
    });

    criterion(2, "expected price is x/2 for 100 random schedules with jumps", 10.0, [](Outcome& o) {
        std::mt19937_64 rng(2024);
        std::uniform_real_distribution<double> U(-1.0, 1.0);
        double worst = 0.0;
        int jumps = 0;
        for (int t = 0; t < 100; ++t) {
            const auto X = oracle::random_schedule(rng);
            for (const auto& k : X.knots()) jumps += k.x_right > k.x_left;
            const auto P = price_function(X);
            for (int i = 0; i < 50; ++i) {
                const double x = U(rng);
                worst = std::max(worst, std::abs(expected_price(P, x) - 0.5 * x));
            }
        }
        o.detail << " worst=" << worst << " jumps=" << jumps;
        o.require(worst < 1e-10, "|expected_price - x/2| < 1e-10");
        o.require(jumps > 0, "sample contains jumps");
    });

    criterion(3, "worked equilibria: quadratic, linear, constant above threshold", 0.0, [](Outcome& o) {
        const auto q = *solve_demand_analytic(Penalty::quadratic(0.125));
        const auto qn = solve_demand_numeric(Penalty::quadratic(0.125));
        o.detail << " x_M=" << q.x_max() << " numeric x_M-0.8=" << qn.x_max() - 0.8;
        o.require(q.x_max() == 0.8, "quadratic x_M = 0.8 exactly");
        o.require(std::abs(qn.x_max() - 0.8) < 1e-9, "numeric quadratic x_M");

        const auto lin = solve_equilibrium(Penalty::linear(0.3), {}, true).schedule;
        bool band = true;
        for (int i = 0; i <= 3000; ++i) {
            const double v = -0.3 + 0.6 * i / 3000.0;
            band = band && lin(v) == 0.0;
        }
        band = band && lin(0.3 + 1e-6) > 0.0 && lin(-0.3 - 1e-6) < 0.0;
        o.require(band, "linear no-trade band |v| <= 0.3");

        const auto pen = Penalty::constant_above(0.2, 0.1);
        const auto ca = solve_equilibrium(pen, {}, true).schedule;
        double worst = 0.0;
        for (int i = 0; i < 1000; ++i) {
            const double v = i / 999.0;
            worst = std::max(worst, std::abs(ca(v) - oracle::argmax(pen, v, 200001)));
        }
        double vstar = 0.0;
        for (const auto& k : ca.knots()) {
            if (k.x_right - k.x_left > 0.1) vstar = k.v;
        }
        o.detail << " constant_above oracle diff=" << worst << " jump at v*=" << vstar
                 << " (x0+sqrt(2K)=" << 0.1 + std::sqrt(0.4) << ", prose value 0.63 not reproduced)";
        o.require(worst < 1e-4, "constant_above matches brute-force argmax to 1e-4");
    });

    criterion(4, "frontier endpoints and S = (1+2G)/sqrt3", 0.0, [](Outcome& o) {
        const auto a = frontier_point(0.0);
        const auto b = frontier_point(0.5);
        o.require(std::abs(-a.G - 1.0 / 6.0) < 1e-12 && std::abs(a.S - 2.0 / (3.0 * kRoot3)) < 1e-12, "K=0");
        o.require(std::abs(b.G) < 1e-12 && std::abs(b.S - 1.0 / kRoot3) < 1e-12, "K=1/2");
        double worst = 0.0;
        for (int i = 0; i < 50; ++i) {
            const double K = 0.5 * i / 49.0;
            const auto m = compute_metrics(DemandSchedule::cutoff(std::sqrt(2.0 * K)));
            worst = std::max(worst, std::abs(m.S - (1.0 + 2.0 * m.G) / kRoot3));
            const auto p = frontier_point(K);
            worst = std::max(worst, std::abs(p.S - (1.0 + 2.0 * p.G) / kRoot3));
        }
        o.detail << " S (K=0)=" << a.S << " worst identity gap=" << worst;
        o.require(worst < 1e-12, "identity across 50 K");
    });

    criterion(5, "Monte Carlo 99% intervals contain closed forms (n=1e6)", 30.0, [](Outcome& o) {
        const std::pair<const char*, Penalty> cases[] = {{"zero", Penalty::zero()},
                                                         {"quadratic", Penalty::quadratic(0.125)},
                                                         {"linear", Penalty::linear(0.3)},
                                                         {"constant_nonzero", Penalty::constant_nonzero(0.2)},
                                                         {"surface", Penalty::surface(0.5, 0.75)}};
        for (const auto& [name, pen] : cases) {
            const auto sol = solve_equilibrium(pen);
            const auto m = compute_metrics(sol.schedule);
            const auto mc = monte_carlo_metrics(sol, 1000000, 7);
            const bool ok = mc.G.contains(m.G) && mc.S.contains(m.S) && mc.F.contains(m.F);
            if (!ok) o.detail << " " << name << " G " << m.G << " vs " << mc.G.mean << "+-" << mc.G.half_width;
            o.require(ok, name);
        }
    });

    criterion(6, "non-pecuniary schedules share |G| and phi_K, differ in S", 0.0, [](Outcome& o) {
        const double K = 0.2;
        const double c = std::sqrt(2.0 * K);
        const double target = (1.0 - std::pow(2.0 * K, 1.5)) / 6.0;
        std::vector<double> S;
        for (double alpha : {0.0, 0.1, 0.2, 0.3}) {
            const auto X = x_alpha_schedule(K, alpha);
            const auto m = compute_metrics(X);
            S.push_back(m.S);
            o.require(std::abs(-m.G - target) < 1e-12, "|G| equals gmin");
            const auto phi = repartition_transform(X);
            double e = 0.0;
            // phi(0) counts {g >= 0} = [0,1]; the closed form is its a.e. version, so z > 0.
            for (int i = 1; i <= 10000; ++i) {
                const double z = i / 10000.0;
                e = std::max(e, std::abs(phi(z) - std::max(c - z, 0.0)));
            }
            o.require(e < 1e-12, "phi equals phi_K");
            std::vector<double> cuts;
            for (const auto& k : X.knots()) cuts.push_back(k.v);
            const double g1 = oracle::piecewise_simpson([&](double v) { return v - X(v); }, cuts, 20);
            const double g2 = oracle::piecewise_simpson([&](double v) { double g = v - X(v); return g * g; }, cuts, 20);
            o.require(std::abs(g1 - phi.integral()) < 1e-12, "first moment identity");
            o.require(std::abs(g2 - 2.0 * phi.first_moment()) < 1e-12, "second moment identity");
        }
        double gap = 1.0;
        for (std::size_t i = 0; i < S.size(); ++i) {
            for (std::size_t j = i + 1; j < S.size(); ++j) gap = std::min(gap, std::abs(S[i] - S[j]));
        }
        o.detail << " min pairwise S gap=" << gap;
        o.require(gap > 1e-6, "pairwise distinct S");
    });

    criterion(7, "surface anchors and formula/schedule agreement on 400x400", 20.0, [](Outcome& o) {
        o.require(std::abs(surface_point(0.5, 1.0).F - 1.0 / 12.0) < 1e-15, "F(1/2,1) = 1/12");
        const auto [K, F] = max_fine_over_optimal_class();
        o.require(std::abs(K - 2.0 / 9.0) < 1e-15 && std::abs(F - 2.0 / 27.0) < 1e-15, "max fine 2/27 at 2/9");
        double best = -1.0, arg = 0.0;
        for (int i = 0; i <= 500000; ++i) {
            const double k = i * 1e-6;
            const double f = k * (1.0 - std::sqrt(2.0 * k));
            if (f > best) best = f, arg = k;
        }
        o.require(std::abs(arg - K) < 1e-5 && std::abs(best - F) < 1e-5, "grid cross-check");
        double worst = 0.0;
        for (const auto& [v1, v2] : sample_index_set(400)) {
            const auto s = surface_point(v1, v2);
            const auto m = compute_metrics(surface_schedule(v1, v2));
            worst = std::max({worst, std::abs(s.G - m.G), std::abs(s.S - m.S), std::abs(s.F - m.F)});
        }
        o.detail << " worst formula gap=" << worst;
        o.require(worst < 1e-12, "formulas match compute_metrics");
    });

    criterion(8, "F_min frontiers: (0.48,0.61) generator, truncated line, non-dominance", 0.0, [](Outcome& o) {
        const int n = 400;
        const double h = 1.0 / (n - 1);
        const auto f07 = fmin_efficient_frontier(0.07, n);
        double nearest = 1.0;
        for (const auto& p : f07) nearest = std::min(nearest, std::max(std::abs(p.v1 - 0.48), std::abs(p.v2 - 0.61)));
        o.detail << " nearest generator to (0.48,0.61): " << nearest;
        // The quoted generator has two significant digits.
        o.require(nearest <= 0.005 + h, "generator near (0.48, 0.61)");

        for (double fmin : {0.0, 0.02, 0.05, 0.07, 2.0 / 27.0}) {
            const auto front = fmin_efficient_frontier(fmin, n);
            // Every diagonal grid generator meeting the fine constraint is on the line and must survive.
            int expected = 0, found = 0;
            for (int j = 0; j < n; ++j) {
                const double v = static_cast<double>(j) / (n - 1);
                if (surface_point(v, v).F < fmin - 1e-15) continue;
                ++expected;
                for (const auto& p : front) found += (p.v1 == v && p.v2 == v);
            }
            o.require(expected > 0 && found == expected, "truncated line segment present");
            for (const auto& a : front) {
                for (const auto& b : front) {
                    const bool dom = b.G >= a.G && b.S <= a.S && (b.G > a.G || b.S < a.S);
                    if (dom) o.require(false, "output dominated");
                }
            }
        }
    });

    criterion(9, "proportional schedules trace the upper boundary; others lie inside", 0.0, [](Outcome& o) {
        auto boundary = [](double S) { return kRoot3 * S - 1.0 + 1.5 * std::pow(1.0 - kRoot3 * S, 2); };
        double worst = 0.0;
        for (int k = 1; k <= 10; ++k) {
            const auto m = compute_metrics(DemandSchedule::proportional(0.1 * k));
            worst = std::max(worst, std::abs(m.G - boundary(m.S)));
        }
        o.require(worst < 1e-12, "boundary equality");
        std::mt19937_64 rng(9);
        std::uniform_real_distribution<double> U(0.0, 1.0);
        double inside = 1.0;
        for (int t = 0; t < 200; ++t) {
            const double beta = 0.1 + 0.8 * U(rng);
            const double eps = (0.05 + 0.15 * U(rng)) * (U(rng) < 0.5 ? -1.0 : 1.0);
            const double vm = 0.2 + 0.6 * U(rng);
            const DemandSchedule X({{0.0, 0.0, 0.0}, {vm, beta * vm * (1.0 + eps), beta * vm * (1.0 + eps)},
                                    {1.0, beta, beta}});
            const auto m = compute_metrics(X);
            inside = std::min(inside, m.G - boundary(m.S));
        }
        std::mt19937_64 rng2(10);
        for (int t = 0; t < 200; ++t) {
            const auto X = oracle::random_sub_identity_schedule(rng2);
            const auto m = compute_metrics(X);
            if (m.G == 0.0) continue;
            inside = std::min(inside, m.G - boundary(m.S));
        }
        o.detail << " boundary gap=" << worst << " min inside margin=" << inside;
        o.require(inside > 0.0, "perturbed schedules strictly inside");
    });

    criterion(10, "Gaussian fixed point: linear benchmark and constant-above shape", 60.0, [](Outcome& o) {
        const GaussianGrid grid{801, 5.0};
        const GaussianOptions opts;
        const auto z = gaussian_fixed_point(Penalty::zero(), grid, opts);
        double err = 0.0;
        for (std::size_t i = 0; i < z.v.size(); ++i) {
            if (std::abs(z.v[i]) <= grid.L - 2.0) err = std::max(err, std::abs(z.X[i] - z.v[i]));
        }
        o.detail << " zero: it=" << z.iterations << " sup err=" << err;
        o.require(z.converged, "zero penalty converged");
        o.require(err < 1e-3, "zero penalty within 1e-3 of X(v)=v");

        const auto pen = Penalty::constant_above(1.0, 0.5);
        const auto s = gaussian_fixed_point(pen, grid, opts);
        o.require(s.converged, "constant-above converged");
        const std::size_t n = s.X.size();
        bool odd = true, mono = true;
        for (std::size_t i = 0; i < n; ++i) odd = odd && s.X[i] == -s.X[n - 1 - i];
        for (std::size_t i = 1; i < n; ++i) mono = mono && s.X[i] >= s.X[i - 1] - 10.0 * opts.tol;
        o.require(odd, "odd");
        o.require(mono && s.monotone, "monotone");
        // Flat band at x0, then an upward jump.
        std::size_t flat = 0, first_flat = n, jump_at = n;
        for (std::size_t i = n / 2; i < n; ++i) {
            if (std::abs(s.X[i] - 0.5) < 1e-6) {
                ++flat;
                first_flat = std::min(first_flat, i);
            }
        }
        for (std::size_t i = n / 2 + 1; i < n; ++i) {
            if (s.X[i] - s.X[i - 1] > 0.2 && std::abs(s.X[i - 1] - 0.5) < 1e-6) jump_at = i;
        }
        o.detail << " constant_above: it=" << s.iterations << " flat points=" << flat;
        if (jump_at < n) o.detail << " jump at v=" << s.v[jump_at];
        o.require(flat >= 5 && jump_at < n && jump_at > first_flat, "flat band at x0 then jump");

        auto next = gaussian_best_response(gaussian_price_update(s.X, grid).P, pen, grid);
        for (std::size_t i = 0; i < n / 2; ++i) {
            const double m = 0.5 * (next[i] - next[n - 1 - i]);
            next[i] = m;
            next[n - 1 - i] = -m;
        }
        next[n / 2] = 0.0;
        double r = 0.0;
        for (std::size_t i = 0; i < n; ++i) r = std::max(r, std::abs(next[i] - s.X[i]));
        o.detail << " self-consistency=" << r;
        o.require(r < 2.0 * opts.tol, "self-consistency < 2 tol");
    });

    criterion(11, "support transform: cutoffs and ranking preserved", 0.0, [](Outcome& o) {
        std::mt19937_64 rng(11);
        std::uniform_real_distribution<double> U(0.0, 1.0);
        double worst = 0.0;
        for (int t = 0; t < 50; ++t) {
            const double a = 0.2 + 4.0 * U(rng);
            const double b = -3.0 + 4.0 * U(rng);
            const SupportSpec spec(a, b, b + 0.2 + 5.0 * U(rng));
            const double K = 0.25 * a * (spec.c - spec.b) * U(rng);
            const auto [lo, hi] = cutoff_points(K, spec);
            for (bool numeric : {false, true}) {
                const auto sol = solve_equilibrium(normalize_penalty(Penalty::constant_nonzero(K), spec), {}, numeric);
                const auto band = denormalize_solution(sol, spec).no_trade_band();
                worst = std::max({worst, std::abs(band.first - lo), std::abs(band.second - hi)});
            }
        }
        o.detail << " worst cutoff gap=" << worst;
        o.require(worst < 1e-10, "cutoffs match formula to 1e-10");

        int agree = 0;
        for (int t = 0; t < 20; ++t) {
            const SupportSpec spec(0.2 + 4.0 * U(rng), -1.0 - U(rng), 0.5 + 2.0 * U(rng));
            auto pick = [&]() {
                switch (static_cast<int>(U(rng) * 4)) {
                case 0: return Penalty::quadratic(2.0 * U(rng));
                case 1: return Penalty::linear(0.8 * U(rng));
                case 2: return Penalty::constant_nonzero(0.5 * U(rng));
                default: return Penalty::constant_above(0.5 * U(rng), 0.5 * U(rng));
                }
            };
            const auto A = denormalize_penalty(pick(), spec);
            const auto B = denormalize_penalty(pick(), spec);
            const auto na = compute_metrics(solve_equilibrium(normalize_penalty(A, spec)).schedule);
            const auto nb = compute_metrics(solve_equilibrium(normalize_penalty(B, spec)).schedule);
            const auto oa = denormalize_metrics(na, spec);
            const auto ob = denormalize_metrics(nb, spec);
            auto sgn = [](double x) { return (x > 0) - (x < 0); };
            agree += sgn(na.S - nb.S) == sgn(oa.S - ob.S) && sgn(na.G - nb.G) == sgn(oa.G - ob.G) &&
                     sgn(na.F - nb.F) == sgn(oa.F - ob.F);
        }
        o.detail << " ranking agreement=" << agree << "/20";
        o.require(agree == 20, "rankings preserved");
    });

    std::printf("%s: %d criteria failed\n", failures ? "FAIL" : "PASS", failures);
    return failures ? 1 : 0;
}
