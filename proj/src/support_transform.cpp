#include "kyle/support_transform.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace kyle {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

// x -> x / xs, C -> C / cs, for every family.
Penalty rescale(const Penalty& p, double xs, double cs) {
    using namespace penalty_kind;
    return std::visit(
        overloaded{
            [](const Zero&) { return Penalty::zero(); },
            [&](const ConstantNonzero& k) { return Penalty::constant_nonzero(k.K / cs); },
            [&](const ConstantAbove& k) { return Penalty::constant_above(k.K / cs, k.x0 / xs); },
            [&](const Linear& k) { return Penalty::linear(k.alpha * xs / cs); },
            [&](const Quadratic& k) { return Penalty::quadratic(k.alpha * xs * xs / cs); },
            [&](const OptimalCanonical& k) {
                const double c = std::sqrt(2.0 * k.K);
                return Penalty::surface(c * xs / cs, c / xs);
            },
            [&](const Surface& k) { return Penalty::surface(k.v1 * xs / cs, k.v2 / xs); },
            [&](const Tabulated& t) {
                auto pts = t.points;
                for (auto& q : pts) {
                    q.x /= xs;
                    q.value /= cs;
                    q.right_value /= cs;
                }
                return Penalty(Tabulated{std::move(pts)});
            },
        },
        p.spec());
}

} // namespace

SupportSpec::SupportSpec(double a_, double b_, double c_) : a(a_), b(b_), c(c_) {
    if (!(a > 0.0 && std::isfinite(a))) throw std::invalid_argument("support: a must be > 0");
    if (!(b < c && std::isfinite(b) && std::isfinite(c))) throw std::invalid_argument("support: need b < c");
}

Penalty normalize_penalty(const Penalty& penalty, const SupportSpec& spec) {
    return rescale(penalty, spec.a, spec.a * spec.sigma());
}

Penalty denormalize_penalty(const Penalty& normalized, const SupportSpec& spec) {
    return rescale(normalized, 1.0 / spec.a, 1.0 / (spec.a * spec.sigma()));
}

GeneralEquilibrium::GeneralEquilibrium(EquilibriumSolution normalized, SupportSpec spec)
    : sol_(std::move(normalized)), spec_(spec) {}

double GeneralEquilibrium::demand(double v) const {
    if (!(v >= spec_.b && v <= spec_.c)) throw std::domain_error("demand: v outside [b, c]");
    // phi(b) and phi(c) can round one ulp past -1 and 1.
    return spec_.a * sol_.schedule(std::clamp(spec_.phi(v), -1.0, 1.0));
}

double GeneralEquilibrium::price(double d) const { return spec_.phi_inverse(sol_.price(d / spec_.a)); }

std::pair<double, double> GeneralEquilibrium::no_trade_band() const {
    // Largest v0 with X0(v0) = 0 on the normalized schedule.
    double v0 = 0.0;
    for (const auto& k : sol_.schedule.knots()) {
        if (k.x_left != 0.0) break;
        v0 = k.v;
        if (k.x_right != 0.0) break;
    }
    return {spec_.phi_inverse(-v0), spec_.phi_inverse(v0)};
}

GeneralEquilibrium denormalize_solution(EquilibriumSolution normalized, const SupportSpec& spec) {
    return GeneralEquilibrium(std::move(normalized), spec);
}

Metrics denormalize_metrics(const Metrics& m, const SupportSpec& spec) {
    const double s = spec.sigma();
    const double as = spec.a * s;
    return {m.G * as, m.S * s, m.PiN * as, m.F * as};
}

std::pair<double, double> cutoff_points(double K, const SupportSpec& spec) {
    if (!(K >= 0.0 && K <= 0.25 * spec.a * (spec.c - spec.b))) {
        throw std::domain_error("cutoff_points: K must lie in [0, a(c-b)/4]");
    }
    const double h = std::sqrt((spec.c - spec.b) * K / spec.a);
    return {spec.m() - h, spec.m() + h};
}

} // namespace kyle
