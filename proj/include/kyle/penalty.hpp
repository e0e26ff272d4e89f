#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace kyle {

/// Parameter records for the supported penalty families. All are defined on
/// [0,1] and mirrored to [-1,0].
namespace penalty_kind {

struct Zero {};

/// C(x) = K for x != 0.
struct ConstantNonzero {
    double K;
};

/// C(x) = K for |x| > x0.
struct ConstantAbove {
    double K;
    double x0;
};

/// C(x) = alpha |x|.
struct Linear {
    double alpha;
};

/// C(x) = alpha x^2.
struct Quadratic {
    double alpha;
};

/// Lower envelope of the optimal class: x(sqrt(2K) - x/2) below sqrt(2K), K above.
struct OptimalCanonical {
    double K;
};

/// v1|x| - (v1 / 2 v2) x^2 for |x| <= v2, v1 v2 / 2 above.
struct Surface {
    double v1;
    double v2;
};

/// One breakpoint of a tabulated penalty. `value` is taken AT x (left
/// continuity); `right_value` is the limit from the right and differs from
/// `value` only when `jump` is set.
struct TabulatedPoint {
    double x;
    double value;
    bool jump = false;
    double right_value = 0.0;
};

/// Piecewise-linear between breakpoints, flat after the last one.
struct Tabulated {
    std::vector<TabulatedPoint> points;
};

} // namespace penalty_kind

using PenaltySpec = std::variant<penalty_kind::Zero,
                                 penalty_kind::ConstantNonzero,
                                 penalty_kind::ConstantAbove,
                                 penalty_kind::Linear,
                                 penalty_kind::Quadratic,
                                 penalty_kind::OptimalCanonical,
                                 penalty_kind::Surface,
                                 penalty_kind::Tabulated>;

/// A symmetric cost schedule C on [-1,1]. Immutable once built.
///
/// Construction rejects malformed parameters (negative scales, unordered
/// tables). Admissibility of tabulated data (C(0)=0, monotonicity) is NOT
/// enforced here so that `validate` can report on arbitrary tables.
class Penalty {
public:
    Penalty() : spec_(penalty_kind::Zero{}) {}
    explicit Penalty(PenaltySpec spec);

    static Penalty zero() { return Penalty(); }
    static Penalty constant_nonzero(double K) { return Penalty(penalty_kind::ConstantNonzero{K}); }
    static Penalty constant_above(double K, double x0) { return Penalty(penalty_kind::ConstantAbove{K, x0}); }
    static Penalty linear(double alpha) { return Penalty(penalty_kind::Linear{alpha}); }
    static Penalty quadratic(double alpha) { return Penalty(penalty_kind::Quadratic{alpha}); }
    static Penalty optimal_canonical(double K) { return Penalty(penalty_kind::OptimalCanonical{K}); }
    static Penalty surface(double v1, double v2) { return Penalty(penalty_kind::Surface{v1, v2}); }
    static Penalty tabulated(std::vector<penalty_kind::TabulatedPoint> points);

    /// C(x) for |x| <= 1; throws std::domain_error outside.
    double evaluate(double x) const;
    double operator()(double x) const { return evaluate(x); }

    /// Family formula without the [-1,1] domain check. Tabulated penalties
    /// stay flat beyond their last breakpoint.
    double evaluate_unbounded(double x) const;

    /// lim_{y -> |x|+} C(y).
    double right_limit(double x) const;

    /// Abscissae in (0, +inf) where C has a kink or a jump, sorted.
    std::vector<double> breakpoints() const;

    const PenaltySpec& spec() const { return spec_; }
    bool is_tabulated() const { return std::holds_alternative<penalty_kind::Tabulated>(spec_); }
    std::string name() const;

private:
    double eval_abs(double a) const;

    PenaltySpec spec_;
};

struct ValidationReport {
    bool ok = true;
    std::string violation; // "C(0)=0", "symmetric", "non-decreasing", "left-continuous"
    double at = 0.0;
};

/// Checks the admissibility invariants on a dense grid plus every breakpoint.
ValidationReport validate(const Penalty& penalty, int grid_points = 10001);

/// Returns K when the penalty belongs to the optimal class (flat at K beyond
/// sqrt(2K), above x(sqrt(2K) - x/2) below it), nullopt otherwise.
std::optional<double> is_in_optimal_class(const Penalty& penalty, double tol = 1e-9,
                                          int grid_points = 10001);

} // namespace kyle
