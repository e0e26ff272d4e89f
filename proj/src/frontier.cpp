#include "kyle/frontier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace kyle {

namespace {

constexpr double inv_sqrt3 = 0.57735026918962576451;
constexpr double sqrt3 = 1.7320508075688772935;

void require_k(double K, const char* who) {
    if (!(K >= 0.0 && K <= 0.5)) throw std::domain_error(std::string(who) + ": K must lie in [0, 1/2]");
}

} // namespace

double gmin_nonpecuniary(double K) {
    require_k(K, "gmin_nonpecuniary");
    return (1.0 - std::pow(2.0 * K, 1.5)) / 6.0;
}

FrontierPoint frontier_point(double K) {
    require_k(K, "frontier_point");
    const double G = -gmin_nonpecuniary(K);
    return {G, inv_sqrt3 * (1.0 + 2.0 * G), K};
}

DemandSchedule x_alpha_schedule(double K, double alpha) {
    require_k(K, "x_alpha_schedule");
    const double c = std::sqrt(2.0 * K);
    if (!(alpha >= 0.0 && alpha <= 1.0 - c + 1e-15)) {
        throw std::domain_error("x_alpha_schedule: alpha must lie in [0, 1 - sqrt(2K)]");
    }
    if (c == 0.0) return DemandSchedule::identity();
    if (alpha == 0.0) return DemandSchedule::cutoff(c);
    const double top = alpha + c;
    if (top >= 1.0) return DemandSchedule({{0.0, 0.0, 0.0}, {alpha, alpha, alpha}, {1.0, alpha, alpha}});
    return DemandSchedule({{0.0, 0.0, 0.0}, {alpha, alpha, alpha}, {top, alpha, top}, {1.0, 1.0, 1.0}});
}

Penalty x_alpha_penalty(double K, double alpha) {
    require_k(K, "x_alpha_penalty");
    return Penalty::constant_above(K, alpha);
}

bool in_index_set(double v1, double v2, double tol) {
    return v2 / (1.0 + v2) <= v1 + tol && v1 <= v2 + tol && v2 <= 1.0 + tol && v2 >= -tol;
}

SurfacePoint surface_point(double v1, double v2) {
    if (!in_index_set(v1, v2)) throw std::domain_error("surface_point: (v1, v2) outside J");
    const double a = v1 * v1 * v2;
    const double b = v1 * v2 * v2;
    return {(a - 1.0) / 6.0, inv_sqrt3 * (2.0 / 3.0 + (a + b) / 6.0), v1 * v2 / 6.0 * (3.0 - 2.0 * v1 - v2), v1,
            v2};
}

DemandSchedule surface_schedule(double v1, double v2) {
    if (!in_index_set(v1, v2)) throw std::domain_error("surface_schedule: (v1, v2) outside J");
    v2 = std::min(v2, 1.0);
    v1 = std::clamp(v1, 0.0, v2);
    if (v1 == 0.0) return DemandSchedule::identity();
    if (v1 == v2) return DemandSchedule::cutoff(v1);
    std::vector<Knot> knots{{0.0, 0.0, 0.0}, {v1, 0.0, 0.0}};
    if (v2 < 1.0) knots.push_back({v2, v2, v2});
    knots.push_back({1.0, 1.0, 1.0});
    return DemandSchedule(std::move(knots));
}

Penalty surface_penalty(double v1, double v2) {
    if (!in_index_set(v1, v2)) throw std::domain_error("surface_penalty: (v1, v2) outside J");
    return Penalty::surface(v1, v2);
}

std::pair<double, double> max_fine_over_optimal_class() {
    // d/dK [K - sqrt2 K^{3/2}] = 1 - (3/2) sqrt(2K) = 0.
    const double K = 2.0 / 9.0;
    return {K, K * (1.0 - std::sqrt(2.0 * K))};
}

std::vector<std::pair<double, double>> sample_index_set(int n) {
    if (n < 2) throw std::invalid_argument("sample_index_set: need n >= 2");
    std::vector<std::pair<double, double>> out;
    out.reserve(static_cast<std::size_t>(n) * n);
    for (int j = 0; j < n; ++j) {
        const double v2 = j == n - 1 ? 1.0 : static_cast<double>(j) / (n - 1);
        const double lo = v2 / (1.0 + v2);
        for (int i = 0; i < n; ++i) {
            const double v1 = i == n - 1 ? v2 : lo + (v2 - lo) * i / (n - 1);
            out.emplace_back(v1, v2);
        }
    }
    return out;
}

std::vector<SurfacePoint> evaluate_surface(const std::vector<std::pair<double, double>>& generators,
                                           Execution exec) {
    std::vector<SurfacePoint> out(generators.size());
    const auto n = static_cast<std::int64_t>(generators.size());
    if (exec == Execution::parallel) {
#pragma omp parallel for schedule(static)
        for (std::int64_t k = 0; k < n; ++k) out[k] = surface_point(generators[k].first, generators[k].second);
    } else {
        for (std::int64_t k = 0; k < n; ++k) out[k] = surface_point(generators[k].first, generators[k].second);
    }
    return out;
}

std::vector<SurfacePoint> pareto_filter(std::vector<SurfacePoint> points) {
    std::stable_sort(points.begin(), points.end(), [](const SurfacePoint& a, const SurfacePoint& b) {
        if (a.G != b.G) return a.G > b.G;
        return a.S < b.S;
    });
    std::vector<SurfacePoint> kept;
    double best_s = std::numeric_limits<double>::infinity();
    for (const auto& p : points) {
        if (p.S < best_s) {
            kept.push_back(p);
            best_s = p.S;
        }
    }
    std::reverse(kept.begin(), kept.end());
    return kept;
}

std::vector<SurfacePoint> fmin_efficient_frontier(double fmin, int grid, Execution exec) {
    if (!(fmin >= 0.0)) throw std::domain_error("fmin must be >= 0");
    if (fmin > 1.0 / 12.0 + 1e-15) throw InfeasibleConstraint("no penalty yields an expected fine above 1/12");
    auto all = evaluate_surface(sample_index_set(grid), exec);
    std::vector<SurfacePoint> feasible;
    for (const auto& p : all) {
        if (p.F >= fmin - 1e-15) feasible.push_back(p);
    }
    return pareto_filter(std::move(feasible));
}

double quadratic_upper_boundary(double S) {
    const double lo = 2.0 / (3.0 * sqrt3);
    if (!(S >= lo - 1e-15 && S <= inv_sqrt3 + 1e-15)) {
        throw std::domain_error("quadratic_upper_boundary: S outside [2/(3 sqrt 3), 1/sqrt 3]");
    }
    const double r = 1.0 - sqrt3 * S;
    return sqrt3 * S - 1.0 + 1.5 * r * r;
}

} // namespace kyle
