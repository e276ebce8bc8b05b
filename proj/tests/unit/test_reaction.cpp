#include <gtest/gtest.h>

#include <cmath>

#include "fracp/reaction.hpp"

using namespace fracp;
using nlohmann::json;

TEST(Reaction, ValueExamples) {
    const Reaction quartic = Reaction::power(1.0, 4.0);
    EXPECT_EQ(quartic.f(-2.0), -8.0);
    EXPECT_EQ(quartic.F(2.0), 4.0);
    EXPECT_EQ(Reaction::sum({Reaction::eigen(3.0, 2.0), quartic}).f(1.0), 4.0);
    EXPECT_EQ(Reaction::truncate_plus(quartic).f(-5.0), 0.0);
    EXPECT_EQ(Reaction::truncate_minus(quartic).f(5.0), 0.0);
    EXPECT_EQ(Reaction::truncate_minus(quartic).f(-2.0), -8.0);
    EXPECT_EQ(Reaction::zero().f(3.0), 0.0);
}

TEST(Reaction, VanishesAtZero) {
    const Reaction trees[] = {
        Reaction::power(2.0, 1.5),
        Reaction::eigen(-1.0, 3.0),
        Reaction::sum({Reaction::power(1.0, 1.2), Reaction::power(-1.0, 4.0)}),
        Reaction::truncate_plus(Reaction::power(1.0, 3.0)),
        Reaction::truncate_minus(Reaction::eigen(2.0, 2.0)),
    };
    for (const auto& r : trees) {
        EXPECT_EQ(r.f(0.0), 0.0);
        EXPECT_EQ(r.F(0.0), 0.0);
    }
}

TEST(Reaction, PrimitiveMatchesQuadratureOfF) {
    const Reaction r = Reaction::sum({Reaction::power(1.0, 1.5), Reaction::eigen(2.0, 2.5),
                                      Reaction::truncate_plus(Reaction::power(-0.5, 4.0))});
    for (double t : {-2.0, -0.3, 0.7, 1.9}) {
        // composite Simpson with 2000 panels
        const int m = 2000;
        double acc = r.f(0.0) + r.f(t);
        for (int k = 1; k < m; ++k) acc += (k % 2 ? 4.0 : 2.0) * r.f(t * k / m);
        EXPECT_NEAR(r.F(t), acc * t / (3.0 * m), 1e-5);  // sqrt-type leaf limits Simpson
    }
}

TEST(Reaction, DerivativeMatchesFiniteDifference) {
    const Reaction r = Reaction::sum({Reaction::power(1.0, 3.5), Reaction::eigen(-2.0, 2.0),
                                      Reaction::truncate_minus(Reaction::power(0.7, 5.0))});
    for (double t : {-1.3, -0.4, 0.2, 1.1, 2.5}) {
        const double e = 1e-6;
        EXPECT_NEAR(r.df(t), (r.f(t + e) - r.f(t - e)) / (2 * e), 1e-6 * (1 + std::abs(r.df(t))));
    }
}

TEST(Reaction, Oddness) {
    EXPECT_TRUE(Reaction::sum({Reaction::power(1.0, 1.5), Reaction::eigen(2.0, 2.0)}).is_odd());
    EXPECT_FALSE(Reaction::truncate_plus(Reaction::power(1.0, 3.0)).is_odd());
}

TEST(Reaction, RejectsBadLeaves) {
    EXPECT_THROW(Reaction::power(1.0, 1.0), std::invalid_argument);
    EXPECT_THROW(Reaction::power(NAN, 3.0), std::invalid_argument);
    EXPECT_THROW(Reaction::eigen(1.0, 0.5), std::invalid_argument);
}

TEST(Reaction, NemytskiiIntegral) {
    const Mesh mesh = build_mesh(0.0, 1.0, 10);
    const Reaction quartic = Reaction::power(1.0, 4.0);
    EXPECT_EQ(nemytskii_integral(quartic, GridFunction(mesh)), 0.0);
    EXPECT_NEAR(nemytskii_integral(quartic, GridFunction(mesh, std::vector<double>(10, 1.0))), 0.25, 1e-15);
}

TEST(Reaction, AmbrosettiRabinowitzExamples) {
    EXPECT_TRUE(check_ar_condition(Reaction::power(1.0, 4.0), 3.0, 1.0, 50).holds);
    const ArReport bad = check_ar_condition(Reaction::power(1.0, 4.0), 5.0, 1.0, 50);
    EXPECT_FALSE(bad.holds);
    EXPECT_FALSE(bad.failures.empty());
    EXPECT_FALSE(check_ar_condition(Reaction::eigen(1.0, 2.0), 3.0, 1.0, 50).holds);
    EXPECT_THROW(check_ar_condition(Reaction::power(1.0, 4.0), 1.0, 1.0, 10), std::invalid_argument);
}

TEST(Reaction, GrowthAuditAndSlope) {
    const Reaction r = Reaction::sum({Reaction::power(2.0, 1.5), Reaction::power(-1.0, 4.0)});
    const GrowthAudit g = audit_growth(r);
    EXPECT_EQ(g.r, 4.0);
    EXPECT_EQ(g.a, 3.0);
    EXPECT_TRUE(g.holds);
    EXPECT_EQ(audit_growth(Reaction::zero()).r, 1.0);
    EXPECT_NEAR(asymptotic_slope(Reaction::eigen(5.0, 2.0), 2.0), 5.0, 1e-12);
    EXPECT_LT(asymptotic_slope(r, 2.0), 0.0);
}

TEST(ReactionJson, RoundTrip) {
    const json j = json::parse(R"({"sum":[{"eigen":{"lambda":3.0,"p":2.0}},{"power":{"c":1.0,"r":4.0}},
                                          {"truncate_plus":{"power":{"c":-1.0,"r":1.5}}}]})");
    const Reaction r = reaction_from_json(j);
    EXPECT_EQ(to_json(r), j);
    EXPECT_EQ(r.f(1.0), 3.0);
    EXPECT_EQ(describe(r), j.dump());
}

TEST(ReactionJson, Strictness) {
    const char* bad[] = {
        R"({"power":{"c":1.0}})",
        R"({"power":{"c":1.0,"r":4.0,"extra":1}})",
        R"({"power":{"c":"1","r":4.0}})",
        R"({"power":{"c":1.0,"r":4.0},"eigen":{"lambda":1.0,"p":2.0}})",
        R"({"cubic":{"c":1.0}})",
        R"({"sum":{"power":{"c":1.0,"r":4.0}}})",
        R"({"power":{"c":1.0,"r":0.5}})",
        R"([1,2])",
    };
    for (const char* text : bad) EXPECT_THROW(reaction_from_json(json::parse(text)), std::invalid_argument) << text;
}
