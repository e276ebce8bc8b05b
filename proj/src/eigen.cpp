#include "fracp/eigen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

#include "fracp/energy.hpp"
#include "linearization.hpp"

namespace fracp {

using detail::axpy;
using detail::dot;
using detail::highest_node;
using detail::unit_difference;
using detail::normalize_lp;

double rayleigh_quotient(const NonlocalKernel& kernel, const GridFunction& u) {
    const double p = kernel.params().p();
    const double mass = std::pow(lp_norm(u, p), p);
    if (mass == 0.0) throw std::invalid_argument("rayleigh_quotient: zero function");
    return seminorm_p(kernel, u) / mass;
}

GridFunction eigen_residual(const NonlocalKernel& kernel, const GridFunction& u, double lambda) {
    GridFunction g = apply_A(kernel, u);
    const double p = kernel.params().p();
    const double scale = lambda * kernel.mesh().h();
    for (std::size_t i = 0; i < g.size(); ++i) g[i] -= scale * signed_power(u[i], p);
    return g;
}

namespace {

constexpr double kArmijo = 1e-4;
constexpr double kMinStep = 1e-12;
// Predicted decreases below this fraction of R are lost to rounding.
constexpr double kNoise = 1e-13;
constexpr double kStringStep = 0.5;

std::size_t default_iterations(const NonlocalKernel& kernel, std::size_t max_iter) {
    return max_iter == 0 ? 50 * kernel.n() : max_iter;
}


// Residual below this fraction of R hands over to Newton.
constexpr double kNewtonZone = 1e-3;

// One damped Newton step on A(u) - lambda h phi(u) = 0, h sum |u|^p = 1, with
// lambda as an unknown. Accepted only if the eigen-residual decreases (and R
// stays below `cap` when given); u and R are updated in place.
bool newton_step(const NonlocalKernel& kernel, GridFunction& u, double& R, double res,
                 double cap = std::numeric_limits<double>::infinity()) {
    const double p = kernel.params().p();
    const double h = kernel.mesh().h();
    const auto n = static_cast<Eigen::Index>(u.size());
    const double floor = detail::weight_floor(u);
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n + 1, n + 1);
    J.topLeftCorner(n, n) = (p - 1.0) * detail::lagged_operator(kernel, u, floor);
    Eigen::VectorXd rhs(n + 1);
    const GridFunction g = eigen_residual(kernel, u, R);
    double mass = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double t = u[static_cast<std::size_t>(i)];
        const double a = std::max(std::abs(t), floor);
        J(i, i) -= R * h * (p - 1.0) * std::pow(a, p - 2.0);
        J(i, n) = -h * signed_power(t, p);
        J(n, i) = p * h * signed_power(t, p);
        rhs(i) = -g[static_cast<std::size_t>(i)];
        mass += std::pow(std::abs(t), p);
    }
    rhs(n) = -(h * mass - 1.0);
    const Eigen::VectorXd delta = J.partialPivLu().solve(rhs);
    if (!delta.allFinite()) return false;
    for (double tau = 1.0; tau >= 1.0 / 16.0; tau *= 0.5) {
        GridFunction v = u;
        for (Eigen::Index i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] += tau * delta(i);
        if (!normalize_lp(v, p)) continue;
        const double Rv = seminorm_p(kernel, v);
        if (Rv <= cap && dual_norm(eigen_residual(kernel, v, Rv), p) < res) {
            u = std::move(v);
            R = Rv;
            return true;
        }
    }
    return false;
}

}  // namespace

EigenResult lambda1(const NonlocalKernel& kernel, double tol, std::size_t max_iter) {
    if (!(tol > 0.0)) throw std::invalid_argument("lambda1: require tol > 0");
    max_iter = default_iterations(kernel, max_iter);
    const double p = kernel.params().p();

    GridFunction u = sample(kernel.mesh(), [](double) { return 1.0; });
    normalize_lp(u, p);
    detail::Preconditioner precond(kernel);

    EigenResult out{.eigenfunction = u};
    double R = seminorm_p(kernel, u);
    double step = 1.0;
    for (std::size_t it = 0;; ++it) {
        const GridFunction g = eigen_residual(kernel, u, R);
        const double res = dual_norm(g, p);
        out.history.push_back(R);
        out.iterations = it;
        out.residual = res;
        if (res < tol) {
            out.converged = true;
            break;
        }
        if (it == max_iter) break;
        if (p > 2.0 && res < kNewtonZone * R && newton_step(kernel, u, R, res, R * (1.0 + kNoise))) continue;

        GridFunction d = precond.solve(u, g);
        d *= -1.0;
        // dR/dtau at tau = 0 on the normalized sphere.
        const double slope = p * dot(g, d);
        bool accepted = false;
        if (-slope > kNoise * std::abs(R)) {
            step = std::min(1.0, 2.0 * step);
            for (double tau = step; tau >= kMinStep; tau *= 0.5) {
                GridFunction v = u;
                axpy(v, tau, d);
                if (!normalize_lp(v, p)) continue;
                const double Rv = seminorm_p(kernel, v);
                if (Rv <= R + kArmijo * tau * slope) {
                    u = std::move(v);
                    R = Rv;
                    step = tau;
                    accepted = true;
                    break;
                }
            }
        }
        if (!accepted) {
            // The decrease of R is below its rounding level: judge the full
            // step by the residual instead.
            GridFunction v = u;
            axpy(v, 1.0, d);
            normalize_lp(v, p);
            const double Rv = seminorm_p(kernel, v);
            if (Rv > R * (1.0 + kNoise) || dual_norm(eigen_residual(kernel, v, Rv), p) >= res) break;
            u = std::move(v);
            R = Rv;
        }
    }
    out.lambda = R;
    out.eigenfunction = u;
    return out;
}

EigenResult lambda2_approx(const NonlocalKernel& kernel, double tol, std::size_t max_iter, std::size_t path_points,
                           const EigenResult* first) {
    if (!(tol > 0.0)) throw std::invalid_argument("lambda2_approx: require tol > 0");
    if (path_points < 3) throw std::invalid_argument("lambda2_approx: require path_points >= 3");
    max_iter = default_iterations(kernel, max_iter);
    const double p = kernel.params().p();
    const Mesh& mesh = kernel.mesh();

    std::optional<EigenResult> own_first;
    if (first == nullptr) {
        own_first = lambda1(kernel, tol, max_iter);
        first = &*own_first;
    }
    const double lam1 = first->lambda;
    GridFunction phi1 = first->eigenfunction;
    if (phi1[0] < 0.0) phi1 *= -1.0;

    // Sign-changing seed: phi_1 times an odd linear profile, made orthogonal to phi_1.
    const double mid = 0.5 * (mesh.a() + mesh.b());
    const double half = 0.5 * mesh.length();
    GridFunction psi = sample(mesh, [&](double x) { return (x - mid) / half; });
    for (std::size_t i = 0; i < psi.size(); ++i) psi[i] *= phi1[i];
    axpy(psi, -dot(psi, phi1) / dot(phi1, phi1), phi1);
    normalize_lp(psi, p);

    const std::size_t m = path_points;
    std::vector<GridFunction> nodes;
    nodes.reserve(m);
    for (std::size_t k = 0; k < m; ++k) {
        const double theta = std::numbers::pi * static_cast<double>(k) / static_cast<double>(m - 1);
        GridFunction v = phi1;
        v *= std::cos(theta);
        axpy(v, std::sin(theta), psi);
        if (k == m - 1) v = -phi1;
        normalize_lp(v, p);
        nodes.push_back(std::move(v));
    }

    detail::Preconditioner precond(kernel);
    std::vector<double> R(m, lam1);
    for (std::size_t k = 1; k + 1 < m; ++k) R[k] = seminorm_p(kernel, nodes[k]);

    EigenResult out{.eigenfunction = nodes[1]};
    std::size_t climb = highest_node(R);
    double res = std::numeric_limits<double>::infinity();
    double best_res = res;
    std::size_t since_best = 0;
    bool frozen = false;
    std::size_t settled = 0;

    // Step for the reversed tangential component; for p = 2 it removes the
    // phi_1 component of the climbing node in one step.
    auto climb_factor = [lam1](double Rc) {
        const double ratio = Rc / lam1 - 1.0;
        return ratio > 1.0 ? 1.0 / ratio : 1.0;
    };

    for (std::size_t it = 0;; ++it) {
        out.iterations = it;
        const GridFunction gc = eigen_residual(kernel, nodes[climb], R[climb]);
        res = dual_norm(gc, p);
        out.history.push_back(R[climb]);
        if (res < tol) {
            out.converged = true;
            break;
        }
        if (it == max_iter) break;
        if (res < 0.999 * best_res) {
            best_res = res;
            since_best = 0;
        } else if (++since_best > 500) {
            break;  // stagnation
        }

        if (!frozen) {
            std::vector<GridFunction> moved = nodes;
            for (std::size_t k = 1; k + 1 < m; ++k) {
                const GridFunction g = k == climb ? gc : eigen_residual(kernel, nodes[k], R[k]);
                GridFunction d = precond.solve(nodes[k], g);
                d *= -1.0;
                const GridFunction t = unit_difference(nodes[k + 1], nodes[k - 1]);
                const double dt = dot(d, t);
                axpy(d, -dt, t);
                if (k == climb) axpy(d, -climb_factor(R[k]) * dt, t);
                axpy(moved[k], kStringStep, d);
                normalize_lp(moved[k], p);
            }
            nodes = std::move(moved);
            const auto to_sphere = [p](GridFunction& v) { return normalize_lp(v, p); };
            detail::reparametrize(nodes, 0, climb, to_sphere);
            detail::reparametrize(nodes, climb, m - 1, to_sphere);
            for (std::size_t k = 1; k + 1 < m; ++k) R[k] = seminorm_p(kernel, nodes[k]);
            const std::size_t next = highest_node(R);
            settled = next == climb ? settled + 1 : 0;
            climb = next;
            // The path has found the pass once the top node stays put.
            if (settled >= 3 && res < 1e-2 * R[climb]) frozen = true;
        } else {
            if (p != 2.0 && res < kNewtonZone * R[climb] && newton_step(kernel, nodes[climb], R[climb], res)) continue;
            GridFunction d = precond.solve(nodes[climb], gc);
            d *= -1.0;
            const GridFunction t = unit_difference(nodes[climb + 1], nodes[climb - 1]);
            const double dt = dot(d, t);
            axpy(d, -(1.0 + climb_factor(R[climb])) * dt, t);
            // Damp until the residual shrinks; the node sits at a saddle, so R is no merit.
            bool moved = false;
            for (double tau = 1.0; tau >= 1.0 / 64.0; tau *= 0.5) {
                GridFunction v = nodes[climb];
                axpy(v, tau, d);
                normalize_lp(v, p);
                const double Rv = seminorm_p(kernel, v);
                if (dual_norm(eigen_residual(kernel, v, Rv), p) < res) {
                    nodes[climb] = std::move(v);
                    R[climb] = Rv;
                    moved = true;
                    break;
                }
            }
            if (!moved) break;
        }
    }
    out.lambda = R[climb];
    out.residual = res;
    out.eigenfunction = nodes[climb];
    return out;
}

SpectralReport check_spectral_properties(const NonlocalKernel& kernel, const EigenResult& result, SpectralKind kind,
                                         std::uint64_t seed, std::size_t probes) {
    const GridFunction& u = result.eigenfunction;
    const double p = kernel.params().p();
    SpectralReport rep;
    rep.kind = kind;
    const bool all_pos = std::all_of(u.values().begin(), u.values().end(), [](double v) { return v > 0.0; });
    const bool all_neg = std::all_of(u.values().begin(), u.values().end(), [](double v) { return v < 0.0; });
    rep.constant_sign = all_pos || all_neg;
    for (std::size_t i = 0; i + 1 < u.size(); ++i)
        if (u[i] * u[i + 1] < 0.0) rep.sign_change = true;
    const double lp = lp_norm(u, p);
    rep.boundedness_ratio = lp > 0.0 ? linf_norm(u) / lp : 0.0;

    if (kind == SpectralKind::first) {
        if (!rep.constant_sign) rep.failures.emplace_back("first eigenfunction is not of constant sign");
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> unif(-1.0, 1.0);
        rep.min_probe = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < probes; ++k) {
            // Alternate rough random vectors with smooth random bumps.
            GridFunction v(u.mesh());
            if (k % 2 == 0) {
                for (std::size_t i = 0; i < v.size(); ++i) v[i] = unif(rng);
            } else {
                const double c = unif(rng), w = 0.25 + 0.5 * std::abs(unif(rng));
                const double mid = 0.5 * (u.mesh().a() + u.mesh().b()), half = 0.5 * u.mesh().length();
                v = sample(u.mesh(), [&](double x) {
                    const double z = (x - mid) / half - 0.5 * c;
                    return std::exp(-z * z / (w * w));
                });
            }
            if (v.is_zero()) continue;
            rep.min_probe = std::min(rep.min_probe, rayleigh_quotient(kernel, v));
        }
        rep.minimal_among_probes = result.lambda <= rep.min_probe * (1.0 + 1e-12);
        if (!rep.minimal_among_probes) rep.failures.emplace_back("a random probe has a smaller Rayleigh quotient");
    } else {
        if (!rep.sign_change) rep.failures.emplace_back("higher eigenfunction does not change sign");
    }
    if (!std::isfinite(rep.boundedness_ratio)) rep.failures.emplace_back("eigenfunction is not bounded");
    rep.passed = rep.failures.empty();
    return rep;
}

}  // namespace fracp
