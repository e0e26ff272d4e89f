#include "kyle/penalty.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <stdexcept>

using namespace kyle;
namespace pk = kyle::penalty_kind;

TEST(Penalty, ConstantNonzeroValues) {
    const auto p = Penalty::constant_nonzero(0.2);
    EXPECT_EQ(p.evaluate(0.0), 0.0);
    EXPECT_EQ(p.evaluate(0.7), 0.2);
    EXPECT_EQ(p.evaluate(-1e-12), 0.2);
}

TEST(Penalty, SurfaceValue) {
    EXPECT_NEAR(Penalty::surface(0.5, 0.75).evaluate(0.6), 0.18, 1e-15);
    // Flat at v1 v2 / 2 above v2.
    EXPECT_NEAR(Penalty::surface(0.5, 0.75).evaluate(0.9), 0.1875, 1e-15);
}

TEST(Penalty, FamilyFormulas) {
    EXPECT_NEAR(Penalty::linear(0.3).evaluate(-0.5), 0.15, 1e-15);
    EXPECT_NEAR(Penalty::quadratic(0.125).evaluate(0.4), 0.02, 1e-15);
    EXPECT_EQ(Penalty::constant_above(0.2, 0.1).evaluate(0.1), 0.0);
    EXPECT_EQ(Penalty::constant_above(0.2, 0.1).evaluate(0.1000001), 0.2);
    const double c = std::sqrt(0.6);
    EXPECT_NEAR(Penalty::optimal_canonical(0.3).evaluate(0.5), 0.5 * (c - 0.25), 1e-15);
    EXPECT_NEAR(Penalty::optimal_canonical(0.3).evaluate(0.9), 0.3, 1e-15);
}

TEST(Penalty, OutOfDomainThrows) {
    EXPECT_THROW(Penalty::linear(0.3).evaluate(1.0001), std::domain_error);
    EXPECT_THROW(Penalty::zero().evaluate(-2.0), std::domain_error);
    EXPECT_NO_THROW(Penalty::linear(0.3).evaluate_unbounded(3.0));
}

TEST(Penalty, BadParametersRejected) {
    EXPECT_THROW(Penalty::linear(-0.1), std::invalid_argument);
    EXPECT_THROW(Penalty::quadratic(-1.0), std::invalid_argument);
    EXPECT_THROW(Penalty::constant_nonzero(-0.2), std::invalid_argument);
}

TEST(Penalty, TabulatedInterpolatesAndHoldsLeftValueAtJump) {
    const auto p = Penalty::tabulated({{0.0, 0.0}, {0.5, 0.1, true, 0.3}, {1.0, 0.4}});
    EXPECT_NEAR(p.evaluate(0.25), 0.05, 1e-15);
    EXPECT_NEAR(p.evaluate(0.5), 0.1, 1e-15);
    EXPECT_NEAR(p.right_limit(0.5), 0.3, 1e-15);
    EXPECT_NEAR(p.evaluate(0.75), 0.35, 1e-15);
    EXPECT_NEAR(p.evaluate(-0.75), 0.35, 1e-15);
}

TEST(Validate, AdmissibleFamiliesPass) {
    EXPECT_TRUE(validate(Penalty::zero()).ok);
    EXPECT_TRUE(validate(Penalty::linear(0.3)).ok);
    EXPECT_TRUE(validate(Penalty::surface(0.5, 0.75)).ok);
    EXPECT_TRUE(validate(Penalty::constant_above(0.2, 0.1)).ok);
}

TEST(Validate, DecreasingTableReported) {
    const auto p = Penalty::tabulated({{0.0, 0.0}, {0.5, 0.3}, {1.0, 0.2}});
    const auto r = validate(p);
    EXPECT_FALSE(r.ok);
    EXPECT_EQ(r.violation, "non-decreasing");
}

TEST(Validate, NonzeroOriginReported) {
    const auto r = validate(Penalty::tabulated({{0.0, 0.1}, {1.0, 0.2}}));
    EXPECT_FALSE(r.ok);
    EXPECT_EQ(r.violation, "C(0)=0");
}

TEST(OptimalClass, ConstantNonzeroRecoversK) {
    for (int i = 0; i < 50; ++i) {
        const double K = 0.5 * i / 49.0;
        const auto k = is_in_optimal_class(Penalty::constant_nonzero(K));
        ASSERT_TRUE(k.has_value()) << K;
        EXPECT_NEAR(*k, K, 1e-15);
    }
}

TEST(OptimalClass, Members) {
    EXPECT_FALSE(is_in_optimal_class(Penalty::quadratic(0.125)).has_value());
    EXPECT_FALSE(is_in_optimal_class(Penalty::linear(0.3)).has_value());
    const auto s = is_in_optimal_class(Penalty::surface(0.6, 0.6));
    ASSERT_TRUE(s.has_value());
    EXPECT_NEAR(*s, 0.18, 1e-12);
    const auto c = is_in_optimal_class(Penalty::optimal_canonical(0.3));
    ASSERT_TRUE(c.has_value());
    EXPECT_NEAR(*c, 0.3, 1e-12);
    // Off-diagonal surface members are not flat at K above sqrt(2K).
    EXPECT_FALSE(is_in_optimal_class(Penalty::surface(0.5, 0.75)).has_value());
}

TEST(PenaltyProperty, SymmetryIsExact) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    const Penalty ps[] = {Penalty::constant_nonzero(0.2), Penalty::constant_above(0.2, 0.1),
                          Penalty::linear(0.3),           Penalty::quadratic(0.7),
                          Penalty::optimal_canonical(0.3), Penalty::surface(0.5, 0.75),
                          Penalty::tabulated({{0.0, 0.0}, {0.3, 0.2, true, 0.25}, {0.8, 0.5}})};
    for (const auto& p : ps) {
        for (int i = 0; i < 1000; ++i) {
            const double x = U(rng);
            EXPECT_EQ(p.evaluate(-x), p.evaluate(x)) << p.name();
        }
    }
}

TEST(PenaltyProperty, RandomTablesAreNonDecreasing) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (int t = 0; t < 100; ++t) {
        std::vector<pk::TabulatedPoint> pts{{0.0, 0.0}};
        double x = 0.0, c = 0.0;
        const int n = 1 + static_cast<int>(U(rng) * 6);
        for (int i = 0; i < n; ++i) {
            x += (1.0 - x) * (0.1 + 0.5 * U(rng));
            c += 0.2 * U(rng);
            const bool jump = U(rng) < 0.4;
            const double right = jump ? c + 0.1 * U(rng) : 0.0;
            pts.push_back({x, c, jump, right});
            if (jump) c = right;
        }
        const auto p = Penalty::tabulated(pts);
        ASSERT_TRUE(validate(p).ok);
        for (int i = 0; i < 200; ++i) {
            double a = U(rng), b = U(rng);
            if (a > b) std::swap(a, b);
            EXPECT_LE(p.evaluate(a), p.evaluate(b));
        }
    }
}
