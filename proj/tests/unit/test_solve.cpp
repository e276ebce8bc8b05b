#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "fracp/eigen.hpp"
#include "fracp/solve.hpp"
#include "support.hpp"

using namespace fracp;
using testing_support::random_function;

namespace {

std::shared_ptr<const NonlocalKernel> kernel(double s, double p, std::size_t n) {
    return std::make_shared<NonlocalKernel>(assemble_kernel(build_mesh(-1.0, 1.0, n), FracParams(s, p)));
}

double first_eigenvalue(const NonlocalKernel& k) { return lambda1(k, 1e-12).lambda; }

// Flags must agree with the values and a converged report must pass an independent residual check.
void expect_consistent(const Problem& prob, const SolveReport& rep, double tol) {
    const auto v = rep.solution.values();
    bool pos = false, neg = false;
    for (double x : v) {
        pos = pos || x > 0.0;
        neg = neg || x < 0.0;
    }
    EXPECT_EQ(rep.flags.sign_plus, pos && !neg);
    EXPECT_EQ(rep.flags.sign_minus, neg && !pos);
    EXPECT_EQ(rep.flags.sign_changing, pos && neg);
    EXPECT_EQ(rep.flags.nonzero, linf_norm(rep.solution) > kZeroThreshold);
    EXPECT_DOUBLE_EQ(rep.energy, phi(prob, rep.solution));
    if (rep.flags.converged) EXPECT_LT(residual_norm(prob, rep.solution), tol);
}

}  // namespace

TEST(GlobalMin, SubcriticalEigenTermGivesZero) {
    const auto k = kernel(0.5, 2.0, 64);
    const Problem prob(k, Reaction::eigen(0.5 * first_eigenvalue(*k), 2.0));
    const SolveReport from_zero = solve_global_min(prob, 1e-10, 0, GridFunction(prob.mesh()));
    EXPECT_TRUE(from_zero.flags.converged);
    EXPECT_EQ(from_zero.iterations, 0u);
    EXPECT_TRUE(from_zero.solution.is_zero());

    std::mt19937_64 rng(1);
    const SolveReport rep = solve_global_min(prob, 1e-10, 0, random_function(prob.mesh(), rng));
    EXPECT_TRUE(rep.flags.converged);
    EXPECT_FALSE(rep.flags.nonzero);
    EXPECT_NEAR(rep.energy, 0.0, 1e-16);
    expect_consistent(prob, rep, 1e-10);
}

TEST(GlobalMin, ConcaveDownCorrectionHasNegativeMinimizer) {
    for (double p : {2.0, 2.5}) {
        const auto k = kernel(0.5, p, 64);
        const EigenResult e1 = lambda1(*k, 1e-12);
        const Problem prob(k, Reaction::sum({Reaction::eigen(1.5 * e1.lambda, p), Reaction::power(-1.0, 4.0)}));
        // line scan: some tau phi_1 already has negative energy
        double best = 0.0;
        for (int j = -10; j <= 10; ++j) best = std::min(best, phi(prob, std::ldexp(1.0, j) * e1.eigenfunction));
        ASSERT_LT(best, 0.0);
        const SolveReport rep = solve_global_min(prob, 1e-9, 0, e1.eigenfunction);
        EXPECT_TRUE(rep.flags.converged) << p;
        EXPECT_TRUE(rep.flags.nonzero);
        EXPECT_LE(rep.energy, best);
        expect_consistent(prob, rep, 1e-9);
        for (std::size_t i = 1; i < rep.history.size(); ++i) EXPECT_GT(rep.history[i - 1], 0.0);
    }
}

TEST(GlobalMin, NonCoerciveIsFlagged) {
    const auto k = kernel(0.5, 2.0, 32);
    const Problem prob(k, Reaction::power(1.0, 4.0));
    const GridFunction start = sample(prob.mesh(), [](double x) { return 10.0 * (1.0 - x * x); });
    const SolveReport rep = solve_global_min(prob, 1e-9, 0, start);
    EXPECT_TRUE(rep.flags.non_coercive);
    EXPECT_FALSE(rep.flags.converged);
}

class ConstantSign : public ::testing::TestWithParam<double> {};

TEST_P(ConstantSign, PairIsOddAndStrictlySigned) {
    const double p = GetParam();
    const auto k = kernel(0.5, p, 64);
    const Reaction f = Reaction::sum({Reaction::power(1.0, 1.5), Reaction::power(-1.0, p + 1.0)});
    const Problem prob(k, f);
    const SolveReport up = solve_constant_sign(prob, Sign::plus, 1e-9, 0);
    const SolveReport um = solve_constant_sign(prob, Sign::minus, 1e-9, 0);
    for (const auto* rep : {&up, &um}) {
        EXPECT_TRUE(rep->flags.converged);
        EXPECT_TRUE(rep->flags.nonzero);
        EXPECT_LT(rep->energy, 0.0);
        EXPECT_FALSE(rep->strict_sign.has_value());  // f(t) t < 0 for large |t|: audit does not apply
        expect_consistent(prob.with_variant(rep == &up ? Variant::plus : Variant::minus), *rep, 1e-9);
        // also a critical point of the full energy
        EXPECT_LT(residual_norm(prob, rep->solution), 1e-8);
    }
    EXPECT_EQ(up.method, SolveMethod::constant_sign_plus);
    EXPECT_EQ(um.method, SolveMethod::constant_sign_minus);
    for (double v : up.solution.values()) EXPECT_GT(v, 0.0);
    for (double v : um.solution.values()) EXPECT_LT(v, 0.0);
    double gap = 0.0;
    for (std::size_t i = 0; i < up.solution.size(); ++i)
        gap = std::max(gap, std::abs(up.solution[i] + um.solution[i]));
    EXPECT_LE(gap, 1e-10);
}

INSTANTIATE_TEST_SUITE_P(Exponents, ConstantSign, ::testing::Values(2.0, 2.5, 3.0));

TEST(ConstantSign, SignConditionGivesStrictSign) {
    const auto k = kernel(0.4, 2.0, 64);
    const double l1 = first_eigenvalue(*k);
    const Problem prob(k, Reaction::sum({Reaction::power(1.0, 1.5), Reaction::eigen(0.5 * l1, 2.0)}));
    for (Sign sign : {Sign::plus, Sign::minus}) {
        const SolveReport rep = solve_constant_sign(prob, sign, 1e-9, 0);
        EXPECT_TRUE(rep.flags.converged);
        ASSERT_TRUE(rep.strict_sign.has_value());
        EXPECT_TRUE(*rep.strict_sign);
        const double m = sign == Sign::plus ? *std::min_element(rep.solution.values().begin(), rep.solution.values().end())
                                            : -*std::max_element(rep.solution.values().begin(), rep.solution.values().end());
        EXPECT_GT(m, 0.0);
    }
}

TEST(ConstantSign, NoEscapeBelowFirstEigenvalue) {
    const auto k = kernel(0.5, 2.0, 64);
    const Problem prob(k, Reaction::eigen(0.5 * first_eigenvalue(*k), 2.0));
    const SolveReport rep = solve_constant_sign(prob, Sign::plus, 1e-9, 0);
    EXPECT_TRUE(rep.solution.is_zero());
    EXPECT_FALSE(rep.flags.nonzero);
    EXPECT_FALSE(rep.diagnostics.empty());
}

TEST(MountainPass, SuperlinearCubic) {
    const auto k = kernel(0.5, 2.0, 96);
    const Problem prob(k, Reaction::power(1.0, 4.0));
    const SolveReport rep = solve_mountain_pass(prob, 1e-8, 0);
    ASSERT_TRUE(rep.geometry.has_value());
    EXPECT_TRUE(rep.geometry->passed);
    EXPECT_GT(rep.geometry->ring_level, 0.0);
    EXPECT_LT(rep.geometry->e_energy, 0.0);
    EXPECT_TRUE(rep.flags.converged);
    EXPECT_TRUE(rep.flags.nonzero);
    EXPECT_TRUE(rep.flags.sign_plus || rep.flags.sign_minus);
    EXPECT_GT(rep.energy, 0.0);
    EXPECT_GE(rep.energy, rep.geometry->ring_level - 1e-8);
    expect_consistent(prob, rep, 1e-8);

    // perturb and refine back
    std::mt19937_64 rng(3);
    GridFunction noisy = rep.solution + 1e-3 * random_function(prob.mesh(), rng);
    const SolveReport back = refine_solution(prob, noisy, 1e-8, 0);
    EXPECT_TRUE(back.flags.converged);
    EXPECT_LE(linf_norm(back.solution - rep.solution), 1e-6);
    for (std::size_t i = 1; i < back.history.size(); ++i) EXPECT_LE(back.history[i], back.history[i - 1]);
}

TEST(MountainPass, LinearPartBelowFirstEigenvalue) {
    const auto k = kernel(0.5, 2.0, 64);
    const double l1 = first_eigenvalue(*k);
    const Problem prob(k, Reaction::sum({Reaction::eigen(0.5 * l1, 2.0), Reaction::power(1.0, 4.0)}));
    const SolveReport rep = solve_mountain_pass(prob, 1e-8, 0);
    EXPECT_TRUE(rep.flags.converged);
    EXPECT_TRUE(rep.flags.nonzero);
    EXPECT_GT(rep.energy, 0.0);
    expect_consistent(prob, rep, 1e-8);
}

TEST(MountainPass, GeometryAuditFailsWithoutNegativeRay) {
    const auto k = kernel(0.5, 2.0, 64);
    const Problem prob(k, Reaction::eigen(0.5 * first_eigenvalue(*k), 2.0));
    const GeometryAudit audit = audit_mountain_pass_geometry(prob);
    EXPECT_FALSE(audit.passed);
    EXPECT_FALSE(audit.ray_found);
    EXPECT_NE(audit.diagnostic.find("negative energy"), std::string::npos);
    const SolveReport rep = solve_mountain_pass(prob, 1e-8, 0);
    EXPECT_TRUE(rep.solution.is_zero());
    EXPECT_FALSE(rep.flags.converged);
    EXPECT_FALSE(rep.diagnostics.empty());
}

TEST(MountainPass, Deterministic) {
    const auto k = kernel(0.3, 2.5, 48);
    const Problem prob(k, Reaction::power(1.0, 3.5));
    const SolveReport a = solve_mountain_pass(prob, 1e-8, 0);
    const SolveReport b = solve_mountain_pass(prob, 1e-8, 0);
    ASSERT_TRUE(a.flags.converged);
    for (std::size_t i = 0; i < a.solution.size(); ++i) EXPECT_EQ(a.solution[i], b.solution[i]);
    EXPECT_EQ(a.iterations, b.iterations);
}

TEST(Refine, CriticalStartsStayPut) {
    const auto k = kernel(0.5, 2.0, 32);
    const Problem prob(k, Reaction::power(1.0, 4.0));
    const SolveReport zero = refine_solution(prob, GridFunction(prob.mesh()), 1e-10, 0);
    EXPECT_TRUE(zero.flags.converged);
    EXPECT_TRUE(zero.solution.is_zero());
    EXPECT_EQ(zero.iterations, 0u);

    const SolveReport mp = solve_mountain_pass(prob, 1e-10, 0);
    ASSERT_TRUE(mp.flags.converged);
    const SolveReport again = refine_solution(prob, mp.solution, 1e-10, 0);
    EXPECT_EQ(again.iterations, 0u);
    for (std::size_t i = 0; i < mp.solution.size(); ++i) EXPECT_EQ(again.solution[i], mp.solution[i]);
}

TEST(Three, ReportsPairAndSearchesForThird) {
    const auto k = kernel(0.5, 2.0, 64);
    const Problem prob(k, Reaction::sum({Reaction::power(1.0, 1.5), Reaction::power(-1.0, 3.0)}));
    const ThreeReport rep = solve_three(prob, 1e-9, 0);
    EXPECT_TRUE(rep.plus.flags.sign_plus);
    EXPECT_TRUE(rep.minus.flags.sign_minus);
    if (rep.third) {
        EXPECT_TRUE(rep.third->flags.converged);
        EXPECT_TRUE(rep.third->flags.nonzero);
        EXPECT_GT(linf_norm(rep.third->solution - rep.plus.solution), 1e-6);
        EXPECT_GT(linf_norm(rep.third->solution - rep.minus.solution), 1e-6);
        expect_consistent(prob, *rep.third, 1e-9);
    }
}
