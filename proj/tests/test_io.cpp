#include "kyle/io.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace kyle;
using kyle::io::ConfigError;
using nlohmann::json;

TEST(PenaltyJson, RoundTripsEveryKind) {
    const Penalty ps[] = {Penalty::zero(),
                          Penalty::constant_nonzero(0.2),
                          Penalty::constant_above(0.2, 0.1),
                          Penalty::linear(0.3),
                          Penalty::quadratic(0.125),
                          Penalty::optimal_canonical(0.3),
                          Penalty::surface(0.5, 0.75),
                          Penalty::tabulated({{0.0, 0.0}, {0.3, 0.05, true, 0.15}, {1.0, 0.2}})};
    for (const auto& p : ps) {
        const auto j = io::penalty_to_json(p);
        const auto q = io::penalty_from_json(json::parse(j.dump()));
        EXPECT_EQ(io::penalty_to_json(q), j);
        for (double x : {-1.0, -0.31, 0.0, 0.1, 0.3, 0.7, 1.0}) EXPECT_EQ(p.evaluate(x), q.evaluate(x)) << j;
    }
}

TEST(PenaltyJson, ThreeElementJumpTakesNextValue) {
    const auto p = io::parse_penalty(R"({"kind":"tabulated","points":[[0,0,false],[0.5,0.1,true],[1,0.4,false]]})");
    EXPECT_NEAR(p.evaluate(0.5), 0.1, 1e-15);
    EXPECT_NEAR(p.right_limit(0.5), 0.4, 1e-15);
    EXPECT_THROW(io::parse_penalty(R"({"kind":"tabulated","points":[[0,0],[1,0.4,true]]})"), ConfigError);
}

TEST(PenaltyJson, Errors) {
    EXPECT_THROW(io::parse_penalty(R"({"kind":"cubic"})"), ConfigError);
    EXPECT_THROW(io::parse_penalty(R"({"kind":"linear"})"), ConfigError);
    EXPECT_THROW(io::parse_penalty(R"({"kind":"linear","alpha":"x"})"), ConfigError);
    EXPECT_THROW(io::parse_penalty(R"({"kind":"linear","alpha":-1})"), ConfigError);
    EXPECT_THROW(io::parse_penalty("{not json"), ConfigError);
    EXPECT_THROW(io::parse_penalty("/nonexistent/penalty.json"), ConfigError);
}

TEST(PenaltyJson, ReadsFromFile) {
    const auto path = std::filesystem::temp_directory_path() / "kyle_test_penalty.json";
    {
        std::ofstream out(path);
        out << R"({"kind":"quadratic","alpha":0.125})";
    }
    const auto p = io::parse_penalty(path.string());
    EXPECT_NEAR(p.evaluate(0.4), 0.02, 1e-15);
    std::filesystem::remove(path);
}

TEST(Csv, FormatRoundTripsAndDropsNegativeZero) {
    EXPECT_EQ(io::format_double(-0.0), "0");
    EXPECT_EQ(io::format_double(0.8), "0.80000000000000004");
    for (double x : {1.0 / 3.0, -2.5e-300, 0.1 + 0.2}) EXPECT_EQ(std::stod(io::format_double(x)), x);
    std::ostringstream os;
    io::write_csv(os, {"v", "X"}, {{0.0, -0.0}, {1.0, 0.5}});
    EXPECT_EQ(os.str(), "v,X\n0,0\n1,0.5\n");
}
