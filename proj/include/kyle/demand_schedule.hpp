#pragma once

#include <span>
#include <utility>
#include <vector>

namespace kyle {

/// Breakpoint of a demand schedule on [0,1]. The schedule equals `x_left` at
/// `v` (left continuity) and restarts from `x_right` just after it.
struct Knot {
    double v;
    double x_left;
    double x_right;
};

/// Odd, non-decreasing, piecewise-linear insider demand X: [-1,1] -> [-1,1].
///
/// Only v in [0,1] is stored; negative arguments go through X(-v) = -X(v).
/// Between consecutive knots the schedule is linear from `x_right` of the
/// lower knot to `x_left` of the upper one.
class DemandSchedule {
public:
    struct Segment {
        double v_start;
        double v_end;
        double x_start; // right limit at v_start
        double x_end;   // value at v_end
    };

    /// Builds from knots covering [0,1]. Throws std::invalid_argument if the
    /// knots violate ordering, monotonicity, X(0)=0 or 0 <= X <= 1.
    explicit DemandSchedule(std::vector<Knot> knots);

    static DemandSchedule identity();
    static DemandSchedule zero();
    /// X(v) = beta v.
    static DemandSchedule proportional(double beta);
    /// X(v) = v for |v| > cutoff, 0 otherwise.
    static DemandSchedule cutoff(double cutoff);

    double evaluate(double v) const;
    double operator()(double v) const { return evaluate(v); }

    /// inf{v in [-1,1] : X(v) >= x}, for x in [-x_M, x_M].
    double inverse_left(double x) const;
    /// sup{v in [-1,1] : X(v) <= x}, for x in [-x_M, x_M].
    double inverse_right(double x) const;

    /// X(1).
    double x_max() const { return knots_.back().x_left; }

    std::span<const Knot> knots() const { return knots_; }
    std::vector<Segment> segments() const;

    /// Non-negative x-levels at which the generalized inverses change slope.
    std::vector<double> levels() const;

    /// (v, X(v)) rows on `grid` (values in [-1,1]); each jump inside the grid
    /// range contributes a left row and a right row at the same v.
    std::vector<std::pair<double, double>> sample(std::span<const double> grid) const;

private:
    double inverse_left_pos(double x) const;
    double inverse_right_nonneg(double x) const;

    std::vector<Knot> knots_;
};

/// Pointwise supremum distance on a uniform grid of [0,1] plus all knots,
/// skipping points within `jump_gap` of a jump of either schedule.
double sup_distance(const DemandSchedule& a, const DemandSchedule& b, int grid_points = 10001,
                    double jump_gap = 1e-9);

} // namespace kyle
