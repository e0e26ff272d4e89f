#include "kyle/metrics.hpp"

#include "rng.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace kyle {

namespace {

constexpr double inv_sqrt3 = 0.57735026918962576451;
constexpr double z99 = 2.5758293035489004;
constexpr int mc_partitions = 64;

// Two-point Gauss-Legendre on [a, b]: exact for cubics, nodes avoid the ends.
template <class F>
double gauss2(F&& f, double a, double b) {
    const double h = 0.5 * (b - a);
    const double c = 0.5 * (a + b);
    const double off = h * 0.57735026918962576451;
    return h * (f(c - off) + f(c + off));
}

struct Linear {
    double v0, v1, x0, x1;
    double operator()(double v) const { return x0 + (x1 - x0) * (v - v0) / (v1 - v0); }
};

// Welford accumulator with Chan's merge.
struct Moments {
    std::int64_t n = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x) {
        ++n;
        const double d = x - mean;
        mean += d / static_cast<double>(n);
        m2 += d * (x - mean);
    }

    void merge(const Moments& o) {
        if (o.n == 0) return;
        if (n == 0) {
            *this = o;
            return;
        }
        const double na = static_cast<double>(n);
        const double nb = static_cast<double>(o.n);
        const double d = o.mean - mean;
        const double nt = na + nb;
        mean += d * nb / nt;
        m2 += o.m2 + d * d * na * nb / nt;
        n += o.n;
    }

    Estimate estimate() const {
        Estimate e{mean, 0.0};
        if (n > 1) e.half_width = z99 * std::sqrt(m2 / static_cast<double>(n - 1) / static_cast<double>(n));
        return e;
    }
};

struct Accumulator {
    Moments G, S, PiN, F;

    void merge(const Accumulator& o) {
        G.merge(o.G);
        S.merge(o.S);
        PiN.merge(o.PiN);
        F.merge(o.F);
    }
};

Accumulator run_partition(const EquilibriumSolution& sol, std::uint64_t seed, int part, std::int64_t count) {
    Accumulator acc;
    auto eng = detail::partition_engine(seed, static_cast<std::uint64_t>(part));
    const auto& X = sol.schedule;
    const double two_sqrt3 = 2.0 / inv_sqrt3;
    for (std::int64_t s = 0; s < count; ++s) {
        const double v = detail::uniform(eng, -1.0, 1.0);
        const double u = detail::uniform(eng, -1.0, 1.0);
        const double x = X(v);
        const double d = x + u;
        const double p = sol.price(d);
        const double fine = sol.penalty.evaluate(x);
        acc.G.add(u * (v - p));
        if (std::abs(d) > sol.price.half_width()) {
            acc.S.add(0.0);
        } else {
            const auto [lo, hi] = sol.price.posterior_interval(d);
            acc.S.add((hi - lo) / two_sqrt3);
        }
        acc.PiN.add(x * (v - p) - fine);
        acc.F.add(fine);
    }
    return acc;
}

std::int64_t partition_size(std::int64_t n, int part) {
    return n / mc_partitions + (part < n % mc_partitions ? 1 : 0);
}

} // namespace

Metrics compute_metrics(const DemandSchedule& X) {
    double absG = 0.0;
    double vx = 0.0;
    double pin = 0.0;
    for (const auto& s : X.segments()) {
        const Linear x{s.v_start, s.v_end, s.x_start, s.x_end};
        absG += gauss2([&](double v) { return x(v) * (v - 0.5 * x(v)); }, s.v_start, s.v_end);
        vx += gauss2([&](double v) { return v * x(v); }, s.v_start, s.v_end);
        pin += gauss2([&](double v) { return (1.0 - v) * x(v); }, s.v_start, s.v_end);
    }
    Metrics m;
    m.G = -absG;
    m.S = inv_sqrt3 * (1.0 - vx);
    m.PiN = pin;
    m.F = absG - pin;
    return m;
}

double pointwise_net_profit(const DemandSchedule& X, double v) {
    if (!(std::abs(v) <= 1.0)) throw std::domain_error("pointwise_net_profit: |v| must be <= 1");
    const double a = std::abs(v);
    double sum = 0.0;
    for (const auto& s : X.segments()) {
        if (s.v_start >= a) break;
        const double end = std::min(s.v_end, a);
        const Linear x{s.v_start, s.v_end, s.x_start, s.x_end};
        sum += 0.5 * (end - s.v_start) * (x(s.v_start) + x(end));
    }
    return sum;
}

bool Estimate::contains(double x) const {
    const double slack = 8.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(mean));
    return x >= lo() - slack && x <= hi() + slack;
}

MonteCarloMetrics monte_carlo_metrics(const EquilibriumSolution& sol, std::int64_t n, std::uint64_t seed,
                                      Execution exec) {
    if (n < 1) throw std::invalid_argument("monte_carlo_metrics: n must be >= 1");
    std::array<Accumulator, mc_partitions> parts;
    if (exec == Execution::parallel) {
#pragma omp parallel for schedule(dynamic, 1)
        for (int p = 0; p < mc_partitions; ++p) {
            parts[p] = run_partition(sol, seed, p, partition_size(n, p));
        }
    } else {
        for (int p = 0; p < mc_partitions; ++p) {
            parts[p] = run_partition(sol, seed, p, partition_size(n, p));
        }
    }
    Accumulator total;
    for (const auto& p : parts) total.merge(p);

    MonteCarloMetrics out;
    out.G = total.G.estimate();
    out.S = total.S.estimate();
    out.PiN = total.PiN.estimate();
    out.F = total.F.estimate();
    out.samples = n;
    out.seed = seed;
    return out;
}

RepartitionTransform::RepartitionTransform(const DemandSchedule& X) {
    breaks_ = {0.0, 1.0};
    for (const auto& s : X.segments()) {
        const Piece p{s.v_end - s.v_start, s.v_start - s.x_start, s.v_end - s.x_end};
        pieces_.push_back(p);
        for (double g : {p.g0, p.g1}) {
            if (g > 0.0 && g < 1.0) breaks_.push_back(g);
        }
    }
    std::sort(breaks_.begin(), breaks_.end());
    breaks_.erase(std::unique(breaks_.begin(), breaks_.end()), breaks_.end());
}

double RepartitionTransform::evaluate(double z) const {
    double phi = 0.0;
    for (const auto& p : pieces_) {
        if (p.g0 == p.g1) {
            if (p.g0 >= z) phi += p.length;
        } else if (p.g1 > p.g0) {
            phi += p.length * std::clamp((p.g1 - z) / (p.g1 - p.g0), 0.0, 1.0);
        } else {
            phi += p.length * std::clamp((p.g0 - z) / (p.g0 - p.g1), 0.0, 1.0);
        }
    }
    return phi;
}

double RepartitionTransform::integral() const {
    double sum = 0.0;
    for (std::size_t k = 0; k + 1 < breaks_.size(); ++k) {
        const double a = breaks_[k];
        const double b = breaks_[k + 1];
        sum += (b - a) * evaluate(0.5 * (a + b));
    }
    return sum;
}

double RepartitionTransform::first_moment() const {
    double sum = 0.0;
    for (std::size_t k = 0; k + 1 < breaks_.size(); ++k) {
        sum += gauss2([&](double z) { return z * evaluate(z); }, breaks_[k], breaks_[k + 1]);
    }
    return sum;
}

RepartitionTransform repartition_transform(const DemandSchedule& X) { return RepartitionTransform(X); }

} // namespace kyle
