#include "fracp/solve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

#include "fracp/eigen.hpp"
#include "linearization.hpp"

namespace fracp {

using detail::axpy;
using detail::dot;

const char* to_string(SolveMethod m) noexcept {
    switch (m) {
        case SolveMethod::global_min: return "global_min";
        case SolveMethod::constant_sign_plus: return "constant_sign_plus";
        case SolveMethod::constant_sign_minus: return "constant_sign_minus";
        case SolveMethod::mountain_pass: return "mountain_pass";
        case SolveMethod::refine: return "refine";
    }
    return "?";
}

std::vector<std::string> SolveFlags::names() const {
    std::vector<std::string> out;
    if (converged) out.emplace_back("converged");
    if (nonzero) out.emplace_back("nonzero");
    if (sign_plus) out.emplace_back("sign_plus");
    if (sign_minus) out.emplace_back("sign_minus");
    if (sign_changing) out.emplace_back("sign_changing");
    if (non_coercive) out.emplace_back("non_coercive");
    if (stagnated) out.emplace_back("stagnated");
    return out;
}

namespace {

constexpr double kArmijo = 1e-4;
constexpr double kMinStep = 1e-12;
constexpr double kDivergence = -1e12;
constexpr double kNoise = 1e-13;
// Newton takes over once the residual is this small relative to |A(u)|.
constexpr double kNewtonZone = 1e-2;
constexpr double kStringStep = 0.5;
constexpr std::size_t kGeometryProbes = 32;

std::size_t default_iterations(const Problem& prob, std::size_t max_iter) {
    return max_iter == 0 ? 50 * prob.mesh().n() : max_iter;
}

void check_tol(double tol, const char* who) {
    if (!(tol > 0.0)) throw std::invalid_argument(std::string(who) + ": require tol > 0");
}

double operator_scale(const Problem& prob, const GridFunction& u) {
    return dual_norm(apply_A(prob.kernel(), u), prob.params().p());
}

void finish(SolveReport& rep, const Problem& prob) {
    const GridFunction& u = rep.solution;
    rep.energy = phi(prob, u);
    rep.residual = residual_norm(prob, u);
    bool pos = false, neg = false;
    for (double v : u.values()) {
        pos = pos || v > 0.0;
        neg = neg || v < 0.0;
    }
    rep.flags.nonzero = linf_norm(u) > kZeroThreshold;
    rep.flags.sign_plus = pos && !neg;
    rep.flags.sign_minus = neg && !pos;
    rep.flags.sign_changing = pos && neg;
}

// Damped Newton step with the residual as merit. With `energy_cap` set, the
// step must also not raise Phi above it (keeps minimizers from sliding to saddles).
bool newton_step(const Problem& prob, GridFunction& u, double res, std::optional<double> energy_cap = {}) {
    const Eigen::MatrixXd J = detail::jacobian(prob, u);
    const Eigen::VectorXd delta = J.partialPivLu().solve(-detail::as_vector(grad_phi(prob, u)));
    if (!delta.allFinite()) return false;
    const GridFunction d = detail::from_vector(prob.mesh(), delta);
    for (double tau = 1.0; tau >= 1.0 / 1024.0; tau *= 0.5) {
        GridFunction v = u;
        axpy(v, tau, d);
        if (residual_norm(prob, v) >= res) continue;
        if (energy_cap && phi(prob, v) > *energy_cap) continue;
        u = std::move(v);
        return true;
    }
    return false;
}

// Damped preconditioned step accepted on residual decrease.
bool residual_step(const Problem& prob, detail::Preconditioner& precond, GridFunction& u, double res) {
    GridFunction d = precond.solve(u, grad_phi(prob, u));
    d *= -1.0;
    for (double tau = 1.0; tau >= 1.0 / 1024.0; tau *= 0.5) {
        GridFunction v = u;
        axpy(v, tau, d);
        if (residual_norm(prob, v) < res) {
            u = std::move(v);
            return true;
        }
    }
    return false;
}

SolveReport descend(const Problem& prob, GridFunction u, double tol, std::size_t max_iter, SolveMethod method) {
    const double p = prob.params().p();
    detail::Preconditioner precond(prob.kernel());
    SolveReport rep{.solution = u, .method = method};
    double step = 1.0;
    for (std::size_t it = 0;; ++it) {
        const GridFunction g = grad_phi(prob, u);
        const double res = dual_norm(g, p);
        rep.history.push_back(res);
        rep.iterations = it;
        if (res < tol) {
            rep.flags.converged = true;
            break;
        }
        if (it == max_iter) break;
        const double E = phi(prob, u);
        if (!(E > kDivergence)) {
            rep.flags.non_coercive = true;
            rep.diagnostics.emplace_back("energy below -1e12: reaction looks non-coercive");
            break;
        }
        const double cap = E + kNoise * std::abs(E);
        if (res < kNewtonZone * operator_scale(prob, u) && newton_step(prob, u, res, cap)) continue;

        GridFunction d = precond.solve(u, g);
        d *= -1.0;
        const double slope = dot(g, d);
        bool accepted = false;
        if (-slope > kNoise * std::max(std::abs(E), 1e-300)) {
            step = std::min(1.0, 2.0 * step);
            for (double tau = step; tau >= kMinStep; tau *= 0.5) {
                GridFunction v = u;
                axpy(v, tau, d);
                if (phi(prob, v) <= E + kArmijo * tau * slope) {
                    u = std::move(v);
                    step = tau;
                    accepted = true;
                    break;
                }
            }
        }
        if (!accepted && !newton_step(prob, u, res, cap) && !residual_step(prob, precond, u, res)) {
            rep.flags.stagnated = true;
            rep.diagnostics.emplace_back("no step decreases the energy or the residual");
            break;
        }
    }
    rep.solution = std::move(u);
    finish(rep, prob);
    return rep;
}

GridFunction positive_phi1(const NonlocalKernel& kernel) {
    GridFunction phi1 = lambda1(kernel).eigenfunction;
    if (phi1[0] < 0.0) phi1 *= -1.0;
    return phi1;
}

// Climbing string between fixed endpoints nodes.front() and nodes.back().
SolveReport climbing_string(const Problem& prob, std::vector<GridFunction> nodes, double tol, std::size_t max_iter,
                            std::vector<GridFunction>* relaxed = nullptr) {
    const std::size_t m = nodes.size();
    const double p = prob.params().p();
    detail::Preconditioner precond(prob.kernel());
    std::vector<double> E(m);
    for (std::size_t k = 0; k < m; ++k) E[k] = phi(prob, nodes[k]);

    SolveReport rep{.solution = nodes[1], .method = SolveMethod::mountain_pass};
    std::size_t climb = detail::highest_node(E);
    std::size_t settled = 0;
    bool frozen = false;
    for (std::size_t it = 0;; ++it) {
        GridFunction& top = nodes[climb];
        const GridFunction gc = grad_phi(prob, top);
        const double res = dual_norm(gc, p);
        rep.history.push_back(res);
        rep.iterations = it;
        if (res < tol) {
            rep.flags.converged = true;
            break;
        }
        if (it == max_iter) break;

        if (!frozen) {
            std::vector<GridFunction> moved = nodes;
            for (std::size_t k = 1; k + 1 < m; ++k) {
                GridFunction d = precond.solve(nodes[k], k == climb ? gc : grad_phi(prob, nodes[k]));
                d *= -1.0;
                const GridFunction t = detail::unit_difference(nodes[k + 1], nodes[k - 1]);
                const double dt = dot(d, t);
                axpy(d, k == climb ? -2.0 * dt : -dt, t);
                // Past the pass the energy is unbounded below; keep nodes from running off.
                const double room = 0.5 * std::min(detail::distance(nodes[k], nodes[k - 1]),
                                                   detail::distance(nodes[k], nodes[k + 1]));
                const double len = std::sqrt(dot(d, d));
                axpy(moved[k], len > 0.0 ? std::min(kStringStep, room / len) : 0.0, d);
            }
            nodes = std::move(moved);
            detail::reparametrize(nodes, 0, climb);
            detail::reparametrize(nodes, climb, m - 1);
            for (std::size_t k = 1; k + 1 < m; ++k) E[k] = phi(prob, nodes[k]);
            const std::size_t next = detail::highest_node(E);
            settled = next == climb ? settled + 1 : 0;
            climb = next;
            if (settled >= 3 && res < kNewtonZone * operator_scale(prob, nodes[climb])) frozen = true;
        } else if (!newton_step(prob, top, res) && !residual_step(prob, precond, top, res)) {
            rep.flags.stagnated = true;
            rep.diagnostics.emplace_back("highest node stopped improving");
            break;
        }
    }
    rep.solution = nodes[climb];
    finish(rep, prob);
    if (relaxed) *relaxed = std::move(nodes);
    return rep;
}

}  // namespace

SolveReport solve_global_min(const Problem& prob, double tol, std::size_t max_iter, const GridFunction& start) {
    check_tol(tol, "solve_global_min");
    require_same_mesh(prob.mesh(), start, "solve_global_min");
    return descend(prob, start, tol, default_iterations(prob, max_iter), SolveMethod::global_min);
}

SolveReport solve_constant_sign(const Problem& prob, Sign sign, double tol, std::size_t max_iter) {
    check_tol(tol, "solve_constant_sign");
    const bool plus = sign == Sign::plus;
    const Problem trunc = prob.with_variant(plus ? Variant::plus : Variant::minus);
    const SolveMethod method = plus ? SolveMethod::constant_sign_plus : SolveMethod::constant_sign_minus;

    GridFunction profile = positive_phi1(prob.kernel());
    if (!plus) profile *= -1.0;
    GridFunction best(prob.mesh());
    double best_energy = 0.0;
    for (int k = 0; k <= 30; ++k) {
        const GridFunction v = std::ldexp(1.0, -k) * profile;
        const double e = phi(trunc, v);
        if (e < best_energy) {
            best_energy = e;
            best = v;
        }
    }
    if (best.is_zero()) {
        SolveReport rep{.solution = best, .method = method};
        rep.diagnostics.emplace_back("no probe tau phi_1 has negative energy; returning 0");
        finish(rep, trunc);
        return rep;
    }

    SolveReport rep = descend(trunc, best, tol, default_iterations(prob, max_iter), method);
    if (rep.flags.converged && rep.flags.nonzero) {
        const bool wrong = plus ? rep.flags.sign_minus || rep.flags.sign_changing
                                : rep.flags.sign_plus || rep.flags.sign_changing;
        const double slack = 1e-8 * linf_norm(rep.solution);
        const auto vals = rep.solution.values();
        const double worst = plus ? *std::min_element(vals.begin(), vals.end())
                                  : -*std::max_element(vals.begin(), vals.end());
        if (wrong && worst < -slack) rep.diagnostics.emplace_back("solution has the wrong sign");
        const Reaction& f = prob.reaction();
        bool sign_condition = true;
        for (int k = -20; k <= 20 && sign_condition; ++k) {
            const double t = std::ldexp(1.0, k);
            sign_condition = f.f(t) * t >= 0.0 && f.f(-t) * -t >= 0.0;
        }
        if (sign_condition) rep.strict_sign = worst > 0.0;
    }
    return rep;
}

namespace {

// phi_1, rough random vectors and smooth random bumps.
std::vector<GridFunction> probe_directions(const Mesh& mesh, const GridFunction& phi1, std::uint64_t seed,
                                           std::size_t probes) {
    std::vector<GridFunction> dirs{phi1};
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    const double mid = 0.5 * (mesh.a() + mesh.b()), half = 0.5 * mesh.length();
    for (std::size_t k = 0; k < probes; ++k) {
        GridFunction v(mesh);
        if (k % 2 == 0) {
            for (std::size_t i = 0; i < v.size(); ++i) v[i] = unif(rng);
        } else {
            const double c = unif(rng), w = 0.25 + 0.5 * std::abs(unif(rng));
            v = sample(mesh, [&](double x) {
                const double z = (x - mid) / half - 0.5 * c;
                return std::exp(-z * z / (w * w));
            });
        }
        if (!v.is_zero()) dirs.push_back(std::move(v));
    }
    return dirs;
}

// Picks the radius below ||e|| maximizing the sampled minimum of Phi on the sphere.
void ring_scan(const Problem& prob, std::vector<GridFunction> dirs, GeometryAudit& audit) {
    const double p = prob.params().p();
    const NonlocalKernel& kernel = prob.kernel();
    for (auto& d : dirs) d *= 1.0 / std::pow(seminorm_p(kernel, d), 1.0 / p);
    const double e_norm = std::pow(seminorm_p(kernel, audit.e), 1.0 / p);
    audit.ring_level = -std::numeric_limits<double>::infinity();
    for (int j = 1; j <= 80; ++j) {
        const double rho = e_norm * std::pow(2.0, -0.5 * j);
        double c = std::numeric_limits<double>::infinity();
        for (const auto& d : dirs) c = std::min(c, phi(prob, rho * d));
        if (c > audit.ring_level) {
            audit.ring_level = c;
            audit.ring_radius = rho;
        }
    }
    audit.ring_found = audit.ring_level > 0.0;
    audit.passed = audit.ray_found && audit.ring_found;
    audit.diagnostic = audit.ring_found ? "" : "no radius with positive energy on the sampled sphere";
}

}  // namespace

GeometryAudit audit_mountain_pass_geometry(const Problem& prob, std::uint64_t seed, std::size_t probes) {
    GeometryAudit audit{.e = GridFunction(prob.mesh())};
    const GridFunction phi1 = positive_phi1(prob.kernel());
    for (int k = 0; k <= 120; ++k) {
        const GridFunction v = std::pow(2.0, 0.5 * k) * phi1;
        const double e = phi(prob, v);
        if (e < 0.0) {
            audit.ray_found = true;
            audit.e = v;
            audit.e_energy = e;
            break;
        }
    }
    if (!audit.ray_found) {
        audit.diagnostic = "no ray with negative energy along phi_1";
        return audit;
    }
    ring_scan(prob, probe_directions(prob.mesh(), phi1, seed, probes), audit);
    return audit;
}

SolveReport solve_mountain_pass(const Problem& prob, double tol, std::size_t max_iter, std::size_t path_points,
                                std::uint64_t seed) {
    check_tol(tol, "solve_mountain_pass");
    if (path_points < 3) throw std::invalid_argument("solve_mountain_pass: require path_points >= 3");
    GeometryAudit audit = audit_mountain_pass_geometry(prob, seed, kGeometryProbes);
    if (!audit.passed) {
        SolveReport rep{.solution = GridFunction(prob.mesh()), .method = SolveMethod::mountain_pass};
        rep.diagnostics.push_back("geometry audit failed: " + audit.diagnostic);
        finish(rep, prob);
        rep.geometry = std::move(audit);
        return rep;
    }
    std::vector<GridFunction> nodes;
    for (std::size_t k = 0; k < path_points; ++k)
        nodes.push_back((static_cast<double>(k) / static_cast<double>(path_points - 1)) * audit.e);
    std::vector<GridFunction> relaxed;
    SolveReport rep = climbing_string(prob, std::move(nodes), tol, default_iterations(prob, max_iter), &relaxed);

    // Random probes only bound the sphere infimum from above; the relaxed path
    // crosses every sphere below ||e||, so its directions sharpen the estimate.
    std::vector<GridFunction> dirs = probe_directions(prob.mesh(), positive_phi1(prob.kernel()), seed, kGeometryProbes);
    for (std::size_t k = 1; k + 1 < relaxed.size(); ++k)
        if (!relaxed[k].is_zero()) dirs.push_back(relaxed[k]);
    dirs.push_back(rep.solution);
    ring_scan(prob, std::move(dirs), audit);
    if (!audit.passed) rep.diagnostics.push_back("geometry audit failed after relaxation: " + audit.diagnostic);
    if (rep.flags.converged && rep.energy < audit.ring_level - tol)
        rep.diagnostics.emplace_back("mountain-pass level below the ring level");
    rep.geometry = std::move(audit);
    return rep;
}

SolveReport refine_solution(const Problem& prob, const GridFunction& u0, double tol, std::size_t max_iter) {
    check_tol(tol, "refine_solution");
    require_same_mesh(prob.mesh(), u0, "refine_solution");
    max_iter = default_iterations(prob, max_iter);
    detail::Preconditioner precond(prob.kernel());
    SolveReport rep{.solution = u0, .method = SolveMethod::refine};
    GridFunction u = u0;
    for (std::size_t it = 0;; ++it) {
        const double res = residual_norm(prob, u);
        rep.history.push_back(res);
        rep.iterations = it;
        if (res < tol) {
            rep.flags.converged = true;
            break;
        }
        if (it == max_iter) break;
        if (!newton_step(prob, u, res) && !residual_step(prob, precond, u, res)) {
            rep.flags.stagnated = true;
            rep.diagnostics.emplace_back("residual stopped decreasing");
            break;
        }
    }
    rep.solution = std::move(u);
    finish(rep, prob);
    return rep;
}

ThreeReport solve_three(const Problem& prob, double tol, std::size_t max_iter, std::size_t path_points) {
    if (path_points < 3) throw std::invalid_argument("solve_three: require path_points >= 3");
    ThreeReport out{.plus = solve_constant_sign(prob, Sign::plus, tol, max_iter),
                    .minus = solve_constant_sign(prob, Sign::minus, tol, max_iter),
                    .third_attempt = SolveReport{.solution = GridFunction(prob.mesh()),
                                                 .method = SolveMethod::mountain_pass}};
    const GridFunction& up = out.plus.solution;
    const GridFunction& um = out.minus.solution;
    if (!(out.plus.flags.converged && out.plus.flags.nonzero && out.minus.flags.converged && out.minus.flags.nonzero)) {
        out.third_attempt.diagnostics.emplace_back("constant-sign pair not found");
        finish(out.third_attempt, prob);
        return out;
    }

    // Bend the straight segment through a sign-changing direction so the
    // string does not start through 0.
    const Mesh& mesh = prob.mesh();
    const double mid = 0.5 * (mesh.a() + mesh.b()), half = 0.5 * mesh.length();
    GridFunction w = 0.5 * (up - um);
    for (std::size_t i = 0; i < w.size(); ++i) w[i] *= (mesh.center(i) - mid) / half;
    std::vector<GridFunction> nodes;
    for (std::size_t k = 0; k < path_points; ++k) {
        const double theta = static_cast<double>(k) / static_cast<double>(path_points - 1);
        GridFunction v = (1.0 - theta) * up;
        axpy(v, theta, um);
        if (k != 0 && k + 1 != path_points) axpy(v, std::sin(std::numbers::pi * theta), w);
        nodes.push_back(std::move(v));
    }
    out.third_attempt = climbing_string(prob, std::move(nodes), tol, default_iterations(prob, max_iter));
    const SolveReport& t = out.third_attempt;
    const double scale = kZeroThreshold * std::max(1.0, linf_norm(up));
    const bool distinct = linf_norm(t.solution - up) > scale && linf_norm(t.solution - um) > scale;
    if (t.flags.converged && t.flags.nonzero && distinct) out.third = t;
    return out;
}

}  // namespace fracp
