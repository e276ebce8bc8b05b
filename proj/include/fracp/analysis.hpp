#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fracp/energy.hpp"

namespace fracp {

/// Levels R_n = h sum (v_n)_i^r of the truncations v_n = (v - 1 + 2^-n)^+.
struct DeGiorgiTrace {
    std::vector<double> levels;
    double rho = 1.0;
    bool monotone = true;
    bool converged = false;  // some R_n < 1e-14
    std::optional<std::size_t> n_star;
};

/// Traces for v = u / (rho ||u||_r) and for -v.
struct DeGiorgiReport {
    double r = 0.0;
    DeGiorgiTrace positive;
    DeGiorgiTrace negative;
    bool converged() const noexcept { return positive.converged && negative.converged; }
    bool monotone() const noexcept { return positive.monotone && negative.monotone; }
};

inline constexpr double kDeGiorgiZero = 1e-14;

/// rho = max(1, 1/||u||_r). u = 0 gives all-zero traces.
DeGiorgiReport degiorgi_iterate(const GridFunction& u, double r, std::size_t max_n = 60);

struct LinftyReport {
    double linf = 0.0;
    double lr = 0.0;
    double ratio = 0.0;  // linf / (1 + lr)
};
LinftyReport linfty_bound_report(const GridFunction& u, double r);

/// Least-squares fit log ||u||_inf = log K + alpha log(1 + ||u||_r) over a batch.
struct LinftyFit {
    double alpha = 0.0;
    double K = 0.0;
    double rms = 0.0;  // of the log residuals
    std::size_t count = 0;
    std::string statement;
};
/// Needs at least two distinct values of ||u||_r.
LinftyFit fit_linfty_bound(const std::vector<LinftyReport>& batch);

enum class DeficitSign { negative, zero, positive };
const char* to_string(DeficitSign s) noexcept;

/// (1 - sp)/p f(t) t - F(t). Power leaves with r within 1e-12 relative of
/// the critical exponent p/(1 - sp) contribute exactly 0.
double pohozaev_integrand(const Reaction& r, const FracParams& params, double t);

struct PohozaevReport {
    double interior_deficit = 0.0;
    /// d/dtheta Phi(u(theta .)) at theta = 1: (sp - 1)/p S(u) + int F(u).
    double scaling_derivative = 0.0;
    /// Central difference over theta = 0.99, 1.01 on the dilated meshes.
    double scaling_derivative_fd = 0.0;
    double fd_relative_error = 0.0;
    double gamma = 0.0;
    /// u_i / d(x_i)^gamma in the first and last cell.
    std::pair<double, double> boundary_profile{0.0, 0.0};
    DeficitSign verdict = DeficitSign::zero;
};

/// gamma in (0, 1); the deficit uses the problem's effective reaction.
PohozaevReport pohozaev_deficit(const Problem& prob, const GridFunction& u, double gamma);

/// u(theta x) sampled on the mesh of (a/theta, b/theta): linear interpolation
/// between centers, zero outside (a, b).
GridFunction dilate(const GridFunction& u, double theta);

enum class NonexistenceVerdict { nonexistence_predicted, strict_nonexistence_predicted, inconclusive };
const char* to_string(NonexistenceVerdict v) noexcept;

struct NonexistenceReport {
    NonexistenceVerdict verdict = NonexistenceVerdict::inconclusive;
    double critical_exponent = 0.0;
    double min_value = 0.0;  // smallest sampled criterion
    struct Witness {
        double t;
        double value;
    };
    std::vector<Witness> witnesses;  // samples with a negative criterion (first 16)
};

/// Samples the criterion pohozaev_integrand(t) >= 0 on [t_lo, t_hi], log-spaced
/// when t_lo > 0. Requires sp < 1.
NonexistenceReport nonexistence_check(const Reaction& r, const FracParams& params, std::pair<double, double> t_range,
                                      std::size_t samples = 1001);

}  // namespace fracp
