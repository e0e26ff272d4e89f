#pragma once

#include "kyle/demand_schedule.hpp"
#include "kyle/execution.hpp"
#include "kyle/penalty.hpp"

#include <stdexcept>
#include <utility>
#include <vector>

namespace kyle {

struct FrontierPoint {
    double G;
    double S;
    double K;
};

struct SurfacePoint {
    double G;
    double S;
    double F;
    double v1;
    double v2;
};

/// Raised when no point of the surface meets the fine constraint.
class InfeasibleConstraint : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Frontier point generated by X_K, K in [0, 1/2].
FrontierPoint frontier_point(double K);

/// (1/6)(1 - (2K)^{3/2}).
double gmin_nonpecuniary(double K);

/// v on [0, alpha], alpha up to alpha + sqrt(2K), v above.
DemandSchedule x_alpha_schedule(double K, double alpha);
Penalty x_alpha_penalty(double K, double alpha);

bool in_index_set(double v1, double v2, double tol = 1e-12);

SurfacePoint surface_point(double v1, double v2);
DemandSchedule surface_schedule(double v1, double v2);
Penalty surface_penalty(double v1, double v2);

/// argmax of K(1 - sqrt(2K)) over [0, 1/2] and the maximal fine.
std::pair<double, double> max_fine_over_optimal_class();

/// n x n grid of J: v2 = j/(n-1), v1 from v2/(1+v2) up to v2.
std::vector<std::pair<double, double>> sample_index_set(int n);

/// Surface points for every generator, in input order.
std::vector<SurfacePoint> evaluate_surface(const std::vector<std::pair<double, double>>& generators,
                                           Execution exec = Execution::parallel);

/// Points not dominated in (max G, min S), sorted by G ascending.
std::vector<SurfacePoint> pareto_filter(std::vector<SurfacePoint> points);

/// Non-dominated projection of the sampled surface restricted to F >= fmin.
/// Throws InfeasibleConstraint when fmin exceeds 1/12.
std::vector<SurfacePoint> fmin_efficient_frontier(double fmin, int grid = 400,
                                                  Execution exec = Execution::parallel);

/// Upper boundary G(S) reached by X = beta v, for S in [2/(3 sqrt 3), 1/sqrt 3].
double quadratic_upper_boundary(double S);

} // namespace kyle
