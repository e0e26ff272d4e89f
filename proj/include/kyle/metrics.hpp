#pragma once

#include "kyle/demand_schedule.hpp"
#include "kyle/equilibrium.hpp"
#include "kyle/execution.hpp"

#include <cstdint>
#include <vector>

namespace kyle {

/// Regulator quantities for one equilibrium.
struct Metrics {
    double G = 0.0;   // uninformed P&L, <= 0
    double S = 0.0;   // expected post-trade standard deviation
    double PiN = 0.0; // net insider profit
    double F = 0.0;   // expected fine, |G| - PiN
};

/// Closed forms integrated exactly on each linear piece of X.
Metrics compute_metrics(const DemandSchedule& X);

/// pi^N(v) = integral of X from 0 to |v|.
double pointwise_net_profit(const DemandSchedule& X, double v);

struct Estimate {
    double mean = 0.0;
    double half_width = 0.0;

    double lo() const { return mean - half_width; }
    double hi() const { return mean + half_width; }
    /// Interval membership with a few ulps of slack for zero-variance samples.
    bool contains(double x) const;
};

struct MonteCarloMetrics {
    Estimate G, S, PiN, F;
    std::int64_t samples = 0;
    std::uint64_t seed = 0;
    double confidence = 0.99;
};

/// Direct sampling of (v, u) with 99% normal confidence intervals. The sample
/// range is split into a fixed number of partitions, so serial and parallel
/// runs agree bit for bit.
MonteCarloMetrics monte_carlo_metrics(const EquilibriumSolution& sol, std::int64_t n, std::uint64_t seed,
                                      Execution exec = Execution::parallel);

/// phi(z) = measure of {v in [0,1] : v - X(v) >= z}.
class RepartitionTransform {
public:
    explicit RepartitionTransform(const DemandSchedule& X);

    double evaluate(double z) const;
    double operator()(double z) const { return evaluate(z); }

    /// Abscissae in [0, 1] where phi may kink or jump.
    const std::vector<double>& breakpoints() const { return breaks_; }

    /// Integral of phi over [0, 1].
    double integral() const;
    /// Integral of z phi(z) over [0, 1].
    double first_moment() const;

private:
    struct Piece {
        double length;
        double g0;
        double g1;
    };
    std::vector<Piece> pieces_;
    std::vector<double> breaks_;
};

RepartitionTransform repartition_transform(const DemandSchedule& X);

} // namespace kyle
