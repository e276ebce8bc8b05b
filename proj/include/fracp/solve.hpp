#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fracp/energy.hpp"

namespace fracp {

enum class SolveMethod { global_min, constant_sign_plus, constant_sign_minus, mountain_pass, refine };

const char* to_string(SolveMethod m) noexcept;

struct SolveFlags {
    bool converged = false;
    bool nonzero = false;
    bool sign_plus = false;      // all values >= 0, some > 0
    bool sign_minus = false;     // all values <= 0, some < 0
    bool sign_changing = false;  // values of both signs
    bool non_coercive = false;   // energy fell below -1e12
    bool stagnated = false;

    std::vector<std::string> names() const;
};

/// Ring and ray found around 0: Phi >= c > 0 on random probes of the sphere
/// ||u|| = ring_radius, and Phi(e) < 0 along the ray through phi_1.
struct GeometryAudit {
    bool ray_found = false;
    GridFunction e;
    double e_energy = 0.0;
    bool ring_found = false;
    double ring_radius = 0.0;  // in the seminorm ||u|| = S(u)^(1/p)
    double ring_level = 0.0;   // c
    bool passed = false;
    std::string diagnostic;
};

struct SolveReport {
    GridFunction solution;
    double energy = 0.0;
    double residual = 0.0;
    std::size_t iterations = 0;
    SolveMethod method = SolveMethod::global_min;
    SolveFlags flags;
    /// Residual per iteration (for the path methods: at the highest node).
    std::vector<double> history;
    std::vector<std::string> diagnostics;
    std::optional<GeometryAudit> geometry;
    /// constant_sign only: min u > 0 (resp. max u < 0) checked because the
    /// reaction satisfies f(t) t >= 0.
    std::optional<bool> strict_sign;
};

/// Below this sup norm a solution counts as zero.
inline constexpr double kZeroThreshold = 1e-6;

/// Preconditioned descent with Armijo backtracking from `start`, finished by
/// energy-decreasing Newton steps. max_iter = 0 selects 50 n.
SolveReport solve_global_min(const Problem& prob, double tol, std::size_t max_iter, const GridFunction& start);

enum class Sign { plus, minus };

/// Minimizes the truncated energy of the given sign, starting from the best of
/// the probes tau phi_1 (tau = 2^-k, k = 0..30). Returns 0 flagged not nonzero
/// when no probe has negative energy.
SolveReport solve_constant_sign(const Problem& prob, Sign sign, double tol, std::size_t max_iter);

/// Ray scan along phi_1 for Phi < 0 and a search for a radius where Phi stays
/// positive on phi_1 and `probes` random directions.
GeometryAudit audit_mountain_pass_geometry(const Problem& prob, std::uint64_t seed = 12345, std::size_t probes = 32);

/// Climbing string from 0 to the audit's e; the highest node (lowest index on
/// ties) climbs, the others descend, then the top node is polished by Newton.
/// A failed audit returns u = 0 with the audit's diagnostic.
SolveReport solve_mountain_pass(const Problem& prob, double tol, std::size_t max_iter, std::size_t path_points = 17,
                                std::uint64_t seed = 12345);

/// Damped Newton on grad_phi = 0 with the residual as merit, falling back to
/// damped preconditioned steps. The residual never increases.
SolveReport refine_solution(const Problem& prob, const GridFunction& u0, double tol, std::size_t max_iter);

/// Constant-sign pair plus a search for a third critical point by a climbing
/// string from u_plus to u_minus, bent through a sign-changing direction.
struct ThreeReport {
    SolveReport plus;
    SolveReport minus;
    /// Present when the string converged to a nonzero point distinct from u_plus and u_minus.
    std::optional<SolveReport> third;
    SolveReport third_attempt;
};
ThreeReport solve_three(const Problem& prob, double tol, std::size_t max_iter, std::size_t path_points = 17);

}  // namespace fracp
