#pragma once

#include "kyle/equilibrium.hpp"
#include "kyle/metrics.hpp"
#include "kyle/penalty.hpp"

#include <utility>

namespace kyle {

/// u ~ U(-a, a), v ~ U(b, c).
struct SupportSpec {
    double a = 1.0;
    double b = -1.0;
    double c = 1.0;

    SupportSpec() = default;
    SupportSpec(double a_, double b_, double c_);

    double m() const { return 0.5 * (b + c); }
    double sigma() const { return 0.5 * (c - b); }
    /// Maps [b, c] onto [-1, 1].
    double phi(double v) const { return (v - m()) / sigma(); }
    double phi_inverse(double v0) const { return m() + sigma() * v0; }
};

/// C0(x0) = C(a x0) / (a sigma). `penalty` is expressed in original units on [-a, a].
Penalty normalize_penalty(const Penalty& penalty, const SupportSpec& spec);

/// Inverse of normalize_penalty.
Penalty denormalize_penalty(const Penalty& normalized, const SupportSpec& spec);

/// Equilibrium in original coordinates built from a normalized one.
class GeneralEquilibrium {
public:
    GeneralEquilibrium(EquilibriumSolution normalized, SupportSpec spec);

    /// X(v) = a X0(phi(v)) for v in [b, c].
    double demand(double v) const;
    /// P(d) = m + sigma P0(d / a).
    double price(double d) const;

    /// [lo, hi] in original coordinates on which the insider does not trade.
    std::pair<double, double> no_trade_band() const;

    const SupportSpec& spec() const { return spec_; }
    const EquilibriumSolution& normalized() const { return sol_; }

private:
    EquilibriumSolution sol_;
    SupportSpec spec_;
};

GeneralEquilibrium denormalize_solution(EquilibriumSolution normalized, const SupportSpec& spec);

/// S scales by sigma, G and F by a sigma.
Metrics denormalize_metrics(const Metrics& normalized, const SupportSpec& spec);

/// m -+ sqrt((c - b) K / a) for a constant penalty K in original units.
std::pair<double, double> cutoff_points(double K, const SupportSpec& spec);

} // namespace kyle
