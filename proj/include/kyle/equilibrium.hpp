#pragma once

#include "kyle/demand_schedule.hpp"
#include "kyle/execution.hpp"
#include "kyle/penalty.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace kyle {

/// Insider's expected net profit x(v - x/2) - C(x) under the linear expected
/// price x/2.
double insider_profit(const Penalty& penalty, double x, double v);

/// Resolution knobs for the numeric argmax solver.
struct ArgmaxGrid {
    int v_points = 4001;
    int x_points = 4001;
    double bracket_tol = 1e-10;
    /// A gap above jump_factor * (v spacing) between neighbouring maximisers is a jump.
    double jump_factor = 10.0;
    /// Coarse local maxima within this distance of the best are refined.
    double plateau_tol = 1e-6;
    /// Candidates within tie_tol of the best profit are ties; the smaller |x| wins.
    double tie_tol = 1e-14;
    /// Allowed decrease between neighbouring maximisers before reporting a solver bug.
    double monotone_tol = 1e-7;
};

/// Maximiser of x -> insider_profit(penalty, x, v) over x in [0,1] for v >= 0,
/// mirrored for v < 0. Ties go to the smaller |x|.
double best_response(const Penalty& penalty, double v, const ArgmaxGrid& grid = {});

/// Closed-form equilibrium demand for the named families; nullopt for
/// tabulated penalties.
std::optional<DemandSchedule> solve_demand_analytic(const Penalty& penalty);

/// Grid + golden-section argmax at every v (with a parabolic polish on each
/// penalty piece), compressed into a schedule with
/// bisection-located jumps. Throws std::logic_error("monotonicity violation")
/// if the maximisers decrease.
DemandSchedule solve_demand_numeric(const Penalty& penalty, const ArgmaxGrid& grid = {},
                                    Execution exec = Execution::parallel);

/// Break-even price of the market maker, with clamps to +-1 outside
/// [-(1+x_M), 1+x_M].
class PriceFunction {
public:
    explicit PriceFunction(DemandSchedule schedule);

    double evaluate(double d) const;
    double operator()(double d) const { return evaluate(d); }

    /// Posterior support of v given d: [X_l^{-1}((d-1) v -x_M), X_r^{-1}((d+1) ^ x_M)].
    std::pair<double, double> posterior_interval(double d) const;

    /// Sorted abscissae where P may kink or jump.
    const std::vector<double>& breakpoints() const { return breakpoints_; }
    double half_width() const { return 1.0 + schedule_.x_max(); }
    const DemandSchedule& schedule() const { return schedule_; }

    /// (d, P(d)) rows on `grid` with left/right rows at every jump.
    std::vector<std::pair<double, double>> sample(std::span<const double> grid) const;

private:
    DemandSchedule schedule_;
    std::vector<double> breakpoints_;
};

PriceFunction price_function(const DemandSchedule& schedule);

/// (1/2) * integral of P over [x-1, x+1], integrated exactly piece by piece.
double expected_price(const PriceFunction& price, double x);

struct SolverMeta {
    bool analytic = false;
    int v_points = 0;
    int x_points = 0;
    double bracket_tol = 0.0;
};

struct EquilibriumSolution {
    Penalty penalty;
    DemandSchedule schedule;
    PriceFunction price;
    SolverMeta meta;
};

/// Analytic solution when available (unless force_numeric), numeric otherwise.
EquilibriumSolution solve_equilibrium(const Penalty& penalty, const ArgmaxGrid& grid = {},
                                      bool force_numeric = false, Execution exec = Execution::parallel);

/// Pairs an arbitrary schedule with its break-even price (used for controls).
EquilibriumSolution make_solution(const Penalty& penalty, DemandSchedule schedule);

struct VerifyOptions {
    double tol = 1e-9;
    int probes = 200;
    std::uint64_t seed = 12345;
    int x_grid_points = 20001;
    std::int64_t mc_samples = 400000;
    int mc_buckets = 20;
    /// Two-sided z-score for each break-even bucket.
    double mc_z = 4.5;
};

struct CheckResult {
    std::string name;
    bool passed = false;
    double worst = 0.0; // largest violation (or |z| for break-even)
};

struct VerificationReport {
    CheckResult linearity;
    CheckResult optimality;
    CheckResult break_even;
    bool all_passed() const { return linearity.passed && optimality.passed && break_even.passed; }
};

VerificationReport verify_equilibrium(const EquilibriumSolution& sol, const VerifyOptions& opts = {});

} // namespace kyle
