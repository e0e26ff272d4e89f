#include "kyle/penalty.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace kyle {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require(bool cond, const char* what) {
    if (!cond) {
        throw std::invalid_argument(what);
    }
}

bool finite_nonneg(double x) { return std::isfinite(x) && x >= 0.0; }

} // namespace

Penalty::Penalty(PenaltySpec spec) : spec_(std::move(spec)) {
    using namespace penalty_kind;
    std::visit(overloaded{
                   [](const Zero&) {},
                   [](const ConstantNonzero& p) { require(finite_nonneg(p.K), "constant_nonzero: K must be >= 0"); },
                   [](const ConstantAbove& p) {
                       require(finite_nonneg(p.K), "constant_above: K must be >= 0");
                       require(finite_nonneg(p.x0), "constant_above: x0 must be >= 0");
                   },
                   [](const Linear& p) { require(finite_nonneg(p.alpha), "linear: alpha must be >= 0"); },
                   [](const Quadratic& p) { require(finite_nonneg(p.alpha), "quadratic: alpha must be >= 0"); },
                   [](const OptimalCanonical& p) { require(finite_nonneg(p.K), "optimal_canonical: K must be >= 0"); },
                   [](const Surface& p) {
                       require(finite_nonneg(p.v1) && finite_nonneg(p.v2), "surface: v1, v2 must be >= 0");
                       require(p.v1 == 0.0 || p.v2 > 0.0, "surface: v2 must be > 0 when v1 > 0");
                   },
                   [](Tabulated& t) {
                       require(!t.points.empty(), "tabulated: need at least one point");
                       require(t.points.front().x == 0.0, "tabulated: first breakpoint must be x=0");
                       for (std::size_t i = 0; i < t.points.size(); ++i) {
                           auto& p = t.points[i];
                           require(std::isfinite(p.x) && std::isfinite(p.value), "tabulated: non-finite entry");
                           if (i > 0) {
                               require(p.x > t.points[i - 1].x, "tabulated: x must be strictly increasing");
                           }
                           if (!p.jump) {
                               p.right_value = p.value;
                           }
                           require(std::isfinite(p.right_value), "tabulated: non-finite right value");
                       }
                   },
               },
               spec_);
}

Penalty Penalty::tabulated(std::vector<penalty_kind::TabulatedPoint> points) {
    return Penalty(penalty_kind::Tabulated{std::move(points)});
}

double Penalty::eval_abs(double a) const {
    using namespace penalty_kind;
    return std::visit(overloaded{
                          [](const Zero&) { return 0.0; },
                          [a](const ConstantNonzero& p) { return a > 0.0 ? p.K : 0.0; },
                          [a](const ConstantAbove& p) { return a > p.x0 ? p.K : 0.0; },
                          [a](const Linear& p) { return p.alpha * a; },
                          [a](const Quadratic& p) { return p.alpha * a * a; },
                          [a](const OptimalCanonical& p) {
                              const double c = std::sqrt(2.0 * p.K);
                              return a <= c ? a * (c - 0.5 * a) : p.K;
                          },
                          [a](const Surface& p) {
                              if (p.v2 <= 0.0) {
                                  return 0.0;
                              }
                              return a <= p.v2 ? p.v1 * a - p.v1 / (2.0 * p.v2) * a * a : 0.5 * p.v1 * p.v2;
                          },
                          [a](const Tabulated& t) {
                              const auto& pts = t.points;
                              if (a <= pts.front().x) {
                                  return pts.front().value;
                              }
                              // first breakpoint with x >= a
                              auto it = std::lower_bound(pts.begin(), pts.end(), a,
                                                         [](const TabulatedPoint& p, double x) { return p.x < x; });
                              if (it == pts.end()) {
                                  return pts.back().right_value;
                              }
                              const auto& hi = *it;
                              const auto& lo = *(it - 1);
                              if (a == hi.x) {
                                  return hi.value;
                              }
                              const double w = (a - lo.x) / (hi.x - lo.x);
                              return lo.right_value + w * (hi.value - lo.right_value);
                          },
                      },
                      spec_);
}

double Penalty::evaluate(double x) const {
    if (!(std::abs(x) <= 1.0)) {
        std::ostringstream os;
        os << "penalty evaluated outside [-1,1]: x=" << x;
        throw std::domain_error(os.str());
    }
    return eval_abs(std::abs(x));
}

double Penalty::evaluate_unbounded(double x) const {
    if (!std::isfinite(x)) {
        throw std::domain_error("penalty evaluated at non-finite x");
    }
    return eval_abs(std::abs(x));
}

double Penalty::right_limit(double x) const {
    using namespace penalty_kind;
    const double a = std::abs(x);
    return std::visit(overloaded{
                          [&](const ConstantNonzero& p) { return p.K; },
                          [&](const ConstantAbove& p) { return a >= p.x0 ? p.K : 0.0; },
                          [&](const Tabulated& t) {
                              for (const auto& p : t.points) {
                                  if (p.x == a) {
                                      return p.right_value;
                                  }
                              }
                              return eval_abs(a);
                          },
                          [&](const auto&) { return eval_abs(a); },
                      },
                      spec_);
}

std::vector<double> Penalty::breakpoints() const {
    using namespace penalty_kind;
    std::vector<double> out;
    std::visit(overloaded{
                   [&](const ConstantAbove& p) {
                       if (p.x0 > 0.0) out.push_back(p.x0);
                   },
                   [&](const OptimalCanonical& p) {
                       if (p.K > 0.0) out.push_back(std::sqrt(2.0 * p.K));
                   },
                   [&](const Surface& p) {
                       if (p.v2 > 0.0) out.push_back(p.v2);
                   },
                   [&](const Tabulated& t) {
                       for (const auto& p : t.points) {
                           if (p.x > 0.0) out.push_back(p.x);
                       }
                   },
                   [](const auto&) {},
               },
               spec_);
    return out;
}

std::string Penalty::name() const {
    using namespace penalty_kind;
    return std::visit(overloaded{
                          [](const Zero&) { return std::string("zero"); },
                          [](const ConstantNonzero&) { return std::string("constant_nonzero"); },
                          [](const ConstantAbove&) { return std::string("constant_above"); },
                          [](const Linear&) { return std::string("linear"); },
                          [](const Quadratic&) { return std::string("quadratic"); },
                          [](const OptimalCanonical&) { return std::string("optimal_canonical"); },
                          [](const Surface&) { return std::string("surface"); },
                          [](const Tabulated&) { return std::string("tabulated"); },
                      },
                      spec_);
}

ValidationReport validate(const Penalty& penalty, int grid_points) {
    ValidationReport report;
    auto fail = [&](const char* what, double at) {
        report.ok = false;
        report.violation = what;
        report.at = at;
        return report;
    };

    if (penalty.evaluate(0.0) != 0.0) {
        return fail("C(0)=0", 0.0);
    }

    std::vector<double> xs;
    xs.reserve(static_cast<std::size_t>(grid_points) + 8);
    for (int i = 0; i < grid_points; ++i) {
        xs.push_back(static_cast<double>(i) / (grid_points - 1));
    }
    const auto bps = penalty.breakpoints();
    for (double b : bps) {
        if (b <= 1.0) xs.push_back(b);
    }
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

    for (double x : xs) {
        if (penalty.evaluate(-x) != penalty.evaluate(x)) {
            return fail("symmetric", x);
        }
    }

    constexpr double slack = 1e-14;
    double prev = 0.0;
    for (double x : xs) {
        const double c = penalty.evaluate(x);
        const double r = penalty.right_limit(x);
        if (c < prev - slack || r < c - slack) {
            return fail("non-decreasing", x);
        }
        prev = r;
    }

    // Left limit by linear extrapolation from below; exact for the
    // piecewise-linear/quadratic families up to O(eps^2).
    constexpr double eps = 1e-7;
    for (double b : bps) {
        if (b > 1.0 || b <= 2 * eps) continue;
        const double left = 2.0 * penalty.evaluate(b - eps) - penalty.evaluate(b - 2 * eps);
        if (std::abs(left - penalty.evaluate(b)) > 1e-9) {
            return fail("left-continuous", b);
        }
    }
    return report;
}

std::optional<double> is_in_optimal_class(const Penalty& penalty, double tol, int grid_points) {
    const double c1 = penalty.evaluate(1.0);
    if (c1 < -tol) {
        return std::nullopt;
    }
    // At K = 1/2 the flat region is empty, so any C(1) >= 1/2 is a candidate.
    const double K = std::clamp(c1, 0.0, 0.5);
    const double cut = std::sqrt(2.0 * K);

    std::vector<double> xs;
    for (int i = 0; i < grid_points; ++i) {
        xs.push_back(static_cast<double>(i) / (grid_points - 1));
    }
    for (double b : penalty.breakpoints()) {
        if (b <= 1.0) xs.push_back(b);
    }
    xs.push_back(std::min(cut, 1.0));

    for (double x : xs) {
        const double c = penalty.evaluate(x);
        if (x <= cut) {
            if (c - x * (cut - 0.5 * x) < -tol) return std::nullopt;
        } else if (std::abs(c - K) > tol) {
            return std::nullopt;
        }
    }
    return K;
}

} // namespace kyle
