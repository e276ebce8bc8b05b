#pragma once

// Internal: lagged-weight linearizations of A used to precondition the
// descent solvers and to assemble Newton steps.

#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "fracp/energy.hpp"

namespace fracp::detail {

inline Eigen::Map<const Eigen::VectorXd> as_vector(const GridFunction& u) {
    return {u.values().data(), static_cast<Eigen::Index>(u.size())};
}

inline GridFunction from_vector(const Mesh& mesh, const Eigen::VectorXd& v) {
    return GridFunction(mesh, std::vector<double>(v.data(), v.data() + v.size()));
}

/// L(u) with L_ij = -2 K_ij w_ij, L_ii = sum_j 2 K_ij w_ij + 2 E_i e_i, where
/// w_ij = max(|u_i - u_j|, floor)^(p-2) and e_i = max(|u_i|, floor)^(p-2).
/// Without flooring L(u) u = A(u), and (p-1) L(u) is the Hessian of S/p.
Eigen::MatrixXd lagged_operator(const NonlocalKernel& kernel, const GridFunction& u, double floor);

/// Floor used for the lagged weights: relative to the size of u, never zero.
double weight_floor(const GridFunction& u);

/// Jacobian of grad_phi: (p-1) L(u) - h diag f'(u).
Eigen::MatrixXd jacobian(const Problem& prob, const GridFunction& u);

/// Cholesky-factored lagged operator; the factorization is reused across
/// calls when p = 2 since L does not depend on u there.
class Preconditioner {
public:
    explicit Preconditioner(const NonlocalKernel& kernel) : kernel_(&kernel) {}

    /// Solves L(u) d = g.
    GridFunction solve(const GridFunction& u, const GridFunction& g);

private:
    const NonlocalKernel* kernel_;
    std::optional<Eigen::LLT<Eigen::MatrixXd>> cached_;
};

/// Scale u so that h sum |u_i|^p = 1. Returns false when u is zero.
bool normalize_lp(GridFunction& u, double p);

/// Euclidean inner product of the nodal vectors.
double dot(const GridFunction& u, const GridFunction& v);

inline void axpy(GridFunction& y, double a, const GridFunction& x) {
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}

// Helpers for discrete paths (strings) of grid functions.

double distance(const GridFunction& a, const GridFunction& b);

/// (a - b) / |a - b|, or a - b when that vanishes.
GridFunction unit_difference(const GridFunction& a, const GridFunction& b);

/// Redistribute nodes first..last (endpoints fixed) to equal arc length along
/// the piecewise-linear path. `project` maps each new node back to the
/// constraint set and may reject it (the old node is then kept).
void reparametrize(std::vector<GridFunction>& nodes, std::size_t first, std::size_t last,
                   const std::function<bool(GridFunction&)>& project = {});

/// Index of the largest interior value, lowest index on ties.
std::size_t highest_node(const std::vector<double>& values);

}  // namespace fracp::detail
