#include <gtest/gtest.h>

#include <cmath>

#include "fracp/analysis.hpp"
#include "support.hpp"

using namespace fracp;
using testing_support::random_function;
using testing_support::rel_err;

TEST(DeGiorgi, ZeroInput) {
    const DeGiorgiReport rep = degiorgi_iterate(GridFunction(build_mesh(0.0, 1.0, 8)), 2.0);
    EXPECT_TRUE(rep.converged());
    EXPECT_EQ(rep.positive.levels.size(), 61u);
    for (double R : rep.positive.levels) EXPECT_EQ(R, 0.0);
    for (double R : rep.negative.levels) EXPECT_EQ(R, 0.0);
    EXPECT_THROW(degiorgi_iterate(GridFunction(build_mesh(0.0, 1.0, 8)), 0.5), std::invalid_argument);
}

TEST(DeGiorgi, MonotoneOnRandomInputs) {
    std::mt19937_64 rng(2718);
    std::uniform_real_distribution<double> logscale(-6.0, 6.0), rdist(1.0, 8.0);
    const Mesh mesh = build_mesh(-1.0, 1.0, 40);
    for (int t = 0; t < 1000; ++t) {
        const GridFunction u = std::pow(10.0, logscale(rng)) * random_function(mesh, rng);
        const double r = rdist(rng);
        const DeGiorgiReport rep = degiorgi_iterate(u, r, 60);
        EXPECT_TRUE(rep.monotone());
        for (const auto* tr : {&rep.positive, &rep.negative}) {
            for (std::size_t n = 1; n < tr->levels.size(); ++n) ASSERT_LE(tr->levels[n], tr->levels[n - 1]);
            EXPECT_LE(tr->levels[0], std::pow(tr->rho, -r) * (1 + 1e-12));
        }
    }
}

TEST(DeGiorgi, StopsByTheDyadicBound) {
    const Mesh mesh = build_mesh(-1.0, 1.0, 16);
    // ||u||_r > 1 so rho = 1 and v = u / ||u||_r; a flat profile on a long interval keeps ||v||_inf < 1.
    const GridFunction u = sample(mesh, [](double x) { return 3.0 + 0.5 * x; });
    const double r = 2.0;
    const DeGiorgiReport rep = degiorgi_iterate(u, r);
    const double vmax = linf_norm(u) / lp_norm(u, r);
    ASSERT_LT(vmax, 1.0);
    const auto bound = static_cast<std::size_t>(std::ceil(std::log2(1.0 / (1.0 - vmax)))) + 1;
    ASSERT_TRUE(rep.positive.n_star.has_value());
    EXPECT_LE(*rep.positive.n_star, bound);
    EXPECT_TRUE(rep.converged());
    EXPECT_EQ(rep.positive.rho, 1.0);
}

TEST(DeGiorgi, SmallFunctionsUseTheLargerRadius) {
    const Mesh mesh = build_mesh(0.0, 1.0, 16);
    const GridFunction u = sample(mesh, [](double x) { return 1e-3 * x; });
    const DeGiorgiReport rep = degiorgi_iterate(u, 3.0);
    EXPECT_NEAR(rep.positive.rho, 1.0 / lp_norm(u, 3.0), 1e-9);
    EXPECT_TRUE(rep.converged());
}

TEST(Linfty, ReportExamples) {
    const Mesh mesh = build_mesh(0.0, 1.0, 10);
    EXPECT_EQ(linfty_bound_report(GridFunction(mesh), 2.0).ratio, 0.0);
    const LinftyReport one = linfty_bound_report(GridFunction(mesh, std::vector<double>(10, 1.0)), 2.0);
    EXPECT_EQ(one.linf, 1.0);
    EXPECT_NEAR(one.lr, 1.0, 1e-15);
    EXPECT_NEAR(one.ratio, 0.5, 1e-15);
}

TEST(Linfty, FitRecoversPowerLaw) {
    std::vector<LinftyReport> batch;
    for (double lr : {0.5, 1.0, 3.0, 10.0}) batch.push_back({2.5 * std::pow(1.0 + lr, 1.7), lr, 0.0});
    const LinftyFit fit = fit_linfty_bound(batch);
    EXPECT_NEAR(fit.alpha, 1.7, 1e-12);
    EXPECT_NEAR(fit.K, 2.5, 1e-12);
    EXPECT_LT(fit.rms, 1e-12);
    EXPECT_EQ(fit.count, 4u);
    EXPECT_FALSE(fit.statement.empty());
    EXPECT_THROW(fit_linfty_bound({batch[0]}), std::invalid_argument);
    EXPECT_THROW(fit_linfty_bound({batch[0], batch[0]}), std::invalid_argument);
}

namespace {

Problem power_problem(double s, double p, double r, std::size_t n = 64) {
    return Problem(build_mesh(-1.0, 1.0, n), FracParams(s, p), Reaction::power(1.0, r));
}

}  // namespace

TEST(Pohozaev, ZeroFunction) {
    const Problem prob = power_problem(0.4, 2.0, 4.0);
    const PohozaevReport rep = pohozaev_deficit(prob, GridFunction(prob.mesh()), 0.4);
    EXPECT_EQ(rep.interior_deficit, 0.0);
    EXPECT_EQ(rep.scaling_derivative, 0.0);
    EXPECT_EQ(rep.scaling_derivative_fd, 0.0);
    EXPECT_EQ(rep.boundary_profile.first, 0.0);
    EXPECT_EQ(rep.boundary_profile.second, 0.0);
    EXPECT_EQ(rep.verdict, DeficitSign::zero);
    EXPECT_THROW(pohozaev_deficit(prob, GridFunction(prob.mesh()), 1.0), std::invalid_argument);
}

TEST(Pohozaev, CriticalPowerHasExactlyZeroDeficit) {
    std::mt19937_64 rng(10);
    for (const auto& [s, p] : {std::pair{0.4, 2.0}, {0.2, 2.5}, {0.3, 3.0}, {0.1, 1.5}}) {
        const FracParams params(s, p);
        const Problem prob = power_problem(s, p, params.critical_exponent());
        for (int t = 0; t < 20; ++t) {
            const GridFunction u = random_function(prob.mesh(), rng, -3.0, 3.0);
            const PohozaevReport rep = pohozaev_deficit(prob, u, s);
            EXPECT_EQ(rep.interior_deficit, 0.0);
            EXPECT_EQ(rep.verdict, DeficitSign::zero);
        }
    }
}

TEST(Pohozaev, SignLawForPurePowers) {
    std::mt19937_64 rng(11);
    const double s = 0.4, p = 2.0;  // critical exponent 10
    for (double r : {3.0, 6.0, 9.5, 10.5, 12.0, 20.0}) {
        const Problem prob = power_problem(s, p, r);
        for (int t = 0; t < 20; ++t) {
            const GridFunction u = random_function(prob.mesh(), rng);
            const PohozaevReport rep = pohozaev_deficit(prob, u, s);
            const double closed = ((1.0 - s * p) * r / p - 1.0) * std::pow(lp_norm(u, r), r) / r;
            EXPECT_LE(rel_err(rep.interior_deficit, closed), 1e-12);
            EXPECT_EQ(rep.verdict, r > 10.0 ? DeficitSign::positive : DeficitSign::negative);
        }
    }
}

TEST(Pohozaev, ScalingDerivativeMatchesFiniteDifference) {
    const auto bump = [](double x) { return std::pow(std::cos(0.5 * M_PI * x), 2); };
    for (const auto& [s, p, r] : {std::tuple{0.4, 2.0, 12.0}, {0.4, 2.0, 4.0}, {0.3, 2.5, 3.0}}) {
        const Problem prob = power_problem(s, p, r, 256);
        const GridFunction u = sample(prob.mesh(), bump);
        const PohozaevReport rep = pohozaev_deficit(prob, u, s);
        EXPECT_LE(rep.fd_relative_error, 1e-4) << s << " " << p << " " << r;
        const double closed = (s * p - 1.0) / p * seminorm_p(prob.kernel(), u) + nemytskii_integral(prob.reaction(), u);
        EXPECT_DOUBLE_EQ(rep.scaling_derivative, closed);
    }
}

TEST(Pohozaev, BoundaryProfile) {
    const Problem prob = power_problem(0.5, 2.0, 4.0, 16);
    const GridFunction u = sample(prob.mesh(), [](double x) { return 1.0 - x * x; });
    const PohozaevReport rep = pohozaev_deficit(prob, u, 0.5);
    const double d = 0.5 * prob.mesh().h();
    EXPECT_DOUBLE_EQ(rep.boundary_profile.first, u[0] / std::sqrt(d));
    EXPECT_DOUBLE_EQ(rep.boundary_profile.second, u[15] / std::sqrt(d));
}

TEST(Dilate, IdentityAndNodeExactness) {
    std::mt19937_64 rng(12);
    const Mesh mesh = build_mesh(-1.0, 1.0, 32);
    const GridFunction u = random_function(mesh, rng);
    const GridFunction same = dilate(u, 1.0);
    EXPECT_EQ(same.mesh(), mesh);
    for (std::size_t i = 0; i < u.size(); ++i) EXPECT_EQ(same[i], u[i]);
    const GridFunction wide = dilate(u, 0.5);
    EXPECT_NEAR(wide.mesh().a(), -2.0, 1e-15);
    EXPECT_THROW(dilate(u, 0.0), std::invalid_argument);
}

TEST(Nonexistence, TrichotomyOnPresets) {
    struct Preset {
        double s, p;
    };
    for (const auto& [s, p] : {Preset{0.4, 2.0}, Preset{0.2, 2.5}, Preset{0.3, 3.0}}) {
        const FracParams params(s, p);
        const double crit = params.critical_exponent();
        const auto check = [&](double r) { return nonexistence_check(Reaction::power(1.0, r), params, {1e-3, 1e3}); };
        const NonexistenceReport below = check(0.8 * crit), at = check(crit), above = check(1.2 * crit);
        EXPECT_EQ(below.verdict, NonexistenceVerdict::inconclusive);
        EXPECT_FALSE(below.witnesses.empty());
        EXPECT_LT(below.min_value, 0.0);
        EXPECT_EQ(at.verdict, NonexistenceVerdict::nonexistence_predicted);
        EXPECT_TRUE(at.witnesses.empty());
        EXPECT_EQ(above.verdict, NonexistenceVerdict::strict_nonexistence_predicted);
        EXPECT_GT(above.min_value, 0.0);
        EXPECT_EQ(above.critical_exponent, crit);
    }
    EXPECT_THROW(nonexistence_check(Reaction::power(1.0, 3.0), FracParams(0.5, 2.0), {1e-3, 1e3}),
                 std::invalid_argument);
    EXPECT_THROW(nonexistence_check(Reaction::power(1.0, 3.0), FracParams(0.4, 2.0), {1.0, 1.0}),
                 std::invalid_argument);
}
