#pragma once

#include "kyle/execution.hpp"
#include "kyle/penalty.hpp"

#include <optional>
#include <vector>

namespace kyle {

/// Uniform grids for u, v ~ N(0,1). v and x live on [-L, L] with n points;
/// d = X(v) + u lives on [-2L, 2L] with the same spacing.
struct GaussianGrid {
    int n = 801;
    double L = 5.0;

    double h() const { return 2.0 * L / (n - 1); }
    int d_points() const { return 2 * n - 1; }
    std::vector<double> v_grid() const;
    std::vector<double> x_grid() const { return v_grid(); }
    std::vector<double> d_grid() const;
};

struct PriceUpdate {
    std::vector<double> P; // on d_grid
    /// True when a plain evaluation of the weights would have underflowed
    /// somewhere; the log-shifted sums used here stay well conditioned.
    bool underflow = false;
};

/// P(d) = E[v | X(v) + u = d] by the trapezoid rule on the v grid.
PriceUpdate gaussian_price_update(const std::vector<double>& X, const GaussianGrid& grid,
                                  Execution exec = Execution::parallel);

/// Phat(x) = E[P(x + u)] on the x grid. With shared spacing x + u always lands
/// on a d-grid node.
std::vector<double> gaussian_expected_price(const std::vector<double>& P, const GaussianGrid& grid);

/// Maximiser of x(v - Phat(x)) - C(x) at every v-grid point, refined by a
/// parabola through the best grid neighbours. Ties go to smaller |x|.
std::vector<double> gaussian_best_response(const std::vector<double>& P, const Penalty& penalty,
                                           const GaussianGrid& grid, Execution exec = Execution::parallel);

struct GaussianOptions {
    double damping = 0.5;
    double tol = 1e-6;
    int max_iter = 500;
    /// Starting schedule on the v grid; defaults to the response to P(d) = d/2.
    std::optional<std::vector<double>> initial;
};

struct GaussianSolution {
    GaussianGrid grid;
    std::vector<double> v, d;
    std::vector<double> X, P, Phat;
    int iterations = 0;
    double residual = 0.0;
    bool converged = false;
    bool monotone = true;
    bool underflow = false;
};

struct GaussianMetrics {
    double G = 0.0; // E[u (v - P(d))] = -E[u P(d)]
    double S = 0.0; // E[std(v | d)]
};

/// Trapezoid estimates of G and S for a converged solution. With X(v) = v the
/// exact values are -1/2 and 1/sqrt(2).
GaussianMetrics gaussian_metrics(const GaussianSolution& sol);

GaussianSolution gaussian_fixed_point(const Penalty& penalty, const GaussianGrid& grid = {},
                                      const GaussianOptions& opts = {}, Execution exec = Execution::parallel);

} // namespace kyle
