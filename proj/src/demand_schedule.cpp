#include "kyle/demand_schedule.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace kyle {

namespace {

[[noreturn]] void bad_knots(const std::string& what) {
    throw std::invalid_argument("demand schedule: " + what);
}

} // namespace

DemandSchedule::DemandSchedule(std::vector<Knot> knots) : knots_(std::move(knots)) {
    if (knots_.size() < 2) bad_knots("need at least two knots");
    if (knots_.front().v != 0.0 || knots_.back().v != 1.0) bad_knots("knots must span [0,1]");
    if (knots_.front().x_left != 0.0) bad_knots("X(0) must be 0");
    knots_.back().x_right = knots_.back().x_left;

    for (std::size_t k = 0; k < knots_.size(); ++k) {
        const auto& kn = knots_[k];
        if (!(std::isfinite(kn.x_left) && std::isfinite(kn.x_right))) bad_knots("non-finite value");
        if (kn.x_left < 0.0 || kn.x_right > 1.0) bad_knots("values must lie in [0,1]");
        if (kn.x_right < kn.x_left) bad_knots("downward jump");
        if (k > 0) {
            if (!(kn.v > knots_[k - 1].v)) bad_knots("knot abscissae must be strictly increasing");
            if (kn.x_left < knots_[k - 1].x_right) {
                std::ostringstream os;
                os << "decreasing segment ending at v=" << kn.v;
                bad_knots(os.str());
            }
        }
    }
}

DemandSchedule DemandSchedule::identity() { return DemandSchedule({{0.0, 0.0, 0.0}, {1.0, 1.0, 1.0}}); }

DemandSchedule DemandSchedule::zero() { return DemandSchedule({{0.0, 0.0, 0.0}, {1.0, 0.0, 0.0}}); }

DemandSchedule DemandSchedule::proportional(double beta) {
    if (!(beta >= 0.0 && beta <= 1.0)) throw std::invalid_argument("proportional schedule needs beta in [0,1]");
    return DemandSchedule({{0.0, 0.0, 0.0}, {1.0, beta, beta}});
}

DemandSchedule DemandSchedule::cutoff(double c) {
    if (!(c >= 0.0)) throw std::invalid_argument("cutoff must be >= 0");
    if (c >= 1.0) return zero();
    if (c == 0.0) return identity();
    return DemandSchedule({{0.0, 0.0, 0.0}, {c, 0.0, c}, {1.0, 1.0, 1.0}});
}

double DemandSchedule::evaluate(double v) const {
    if (!(std::abs(v) <= 1.0)) {
        std::ostringstream os;
        os << "demand evaluated outside [-1,1]: v=" << v;
        throw std::domain_error(os.str());
    }
    if (v < 0.0) return -evaluate(-v);
    if (v == 0.0) return 0.0;
    auto it = std::lower_bound(knots_.begin(), knots_.end(), v, [](const Knot& k, double x) { return k.v < x; });
    const Knot& hi = *it;
    if (hi.v == v) return hi.x_left;
    const Knot& lo = *(it - 1);
    const double w = (v - lo.v) / (hi.v - lo.v);
    return lo.x_right + w * (hi.x_left - lo.x_right);
}

double DemandSchedule::inverse_right_nonneg(double x) const {
    const std::size_t m = knots_.size() - 1;
    for (std::size_t k = 0; k < m; ++k) {
        const double xs = knots_[k].x_right;
        if (xs > x) return knots_[k].v;
        const double xe = knots_[k + 1].x_left;
        if (xe > x) {
            return knots_[k].v + (x - xs) / (xe - xs) * (knots_[k + 1].v - knots_[k].v);
        }
    }
    return 1.0;
}

double DemandSchedule::inverse_left_pos(double x) const {
    const std::size_t m = knots_.size() - 1;
    for (std::size_t k = 0; k < m; ++k) {
        if (knots_[k].x_left >= x || knots_[k].x_right >= x) return knots_[k].v;
        const double xs = knots_[k].x_right;
        const double xe = knots_[k + 1].x_left;
        if (xe >= x) {
            return knots_[k].v + (x - xs) / (xe - xs) * (knots_[k + 1].v - knots_[k].v);
        }
    }
    return 1.0;
}

namespace {

void check_level(double x, double xm) {
    if (!(std::abs(x) <= xm)) {
        std::ostringstream os;
        os << "generalized inverse queried at x=" << x << " outside [-x_M, x_M], x_M=" << xm;
        throw std::domain_error(os.str());
    }
}

} // namespace

double DemandSchedule::inverse_left(double x) const {
    check_level(x, x_max());
    return x > 0.0 ? inverse_left_pos(x) : -inverse_right_nonneg(-x);
}

double DemandSchedule::inverse_right(double x) const {
    check_level(x, x_max());
    return x >= 0.0 ? inverse_right_nonneg(x) : -inverse_left_pos(-x);
}

std::vector<DemandSchedule::Segment> DemandSchedule::segments() const {
    std::vector<Segment> out;
    out.reserve(knots_.size() - 1);
    for (std::size_t k = 0; k + 1 < knots_.size(); ++k) {
        out.push_back({knots_[k].v, knots_[k + 1].v, knots_[k].x_right, knots_[k + 1].x_left});
    }
    return out;
}

std::vector<double> DemandSchedule::levels() const {
    std::vector<double> out;
    out.reserve(2 * knots_.size());
    for (const auto& k : knots_) {
        out.push_back(k.x_left);
        out.push_back(k.x_right);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<std::pair<double, double>> DemandSchedule::sample(std::span<const double> grid) const {
    std::vector<std::pair<double, double>> rows;
    if (grid.empty()) return rows;
    const double lo = grid.front();
    const double hi = grid.back();

    struct Jump {
        double v;
        double left;
        double right;
    };
    std::vector<Jump> jumps;
    for (const auto& k : knots_) {
        if (k.x_right == k.x_left) continue;
        if (k.v == 0.0) {
            jumps.push_back({0.0, -k.x_right, k.x_right});
        } else {
            jumps.push_back({k.v, k.x_left, k.x_right});
            jumps.push_back({-k.v, -k.x_right, -k.x_left});
        }
    }

    std::vector<double> vs(grid.begin(), grid.end());
    for (const auto& j : jumps) {
        if (j.v >= lo && j.v <= hi) vs.push_back(j.v);
    }
    std::sort(vs.begin(), vs.end());
    vs.erase(std::unique(vs.begin(), vs.end()), vs.end());

    for (double v : vs) {
        auto it = std::find_if(jumps.begin(), jumps.end(), [v](const Jump& j) { return j.v == v; });
        if (it == jumps.end()) {
            rows.emplace_back(v, evaluate(v));
        } else {
            rows.emplace_back(v, it->left);
            if (v == 0.0) rows.emplace_back(v, 0.0);
            rows.emplace_back(v, it->right);
        }
    }
    return rows;
}

double sup_distance(const DemandSchedule& a, const DemandSchedule& b, int grid_points, double jump_gap) {
    std::vector<double> jumps;
    for (const auto* s : {&a, &b}) {
        for (const auto& k : s->knots()) {
            if (k.x_right != k.x_left) jumps.push_back(k.v);
        }
    }
    auto near_jump = [&](double v) {
        return std::any_of(jumps.begin(), jumps.end(), [&](double j) { return std::abs(v - j) <= jump_gap; });
    };
    std::vector<double> vs;
    vs.reserve(static_cast<std::size_t>(grid_points));
    for (int i = 0; i < grid_points; ++i) vs.push_back(static_cast<double>(i) / (grid_points - 1));
    for (const auto& k : a.knots()) vs.push_back(k.v);
    for (const auto& k : b.knots()) vs.push_back(k.v);
    double d = 0.0;
    for (double v : vs) {
        if (!near_jump(v)) d = std::max(d, std::abs(a(v) - b(v)));
    }
    return d;
}

} // namespace kyle
