#include "linearization.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fracp::detail {

namespace {

double weight(double diff, double p, double floor) {
    if (p == 2.0) return 1.0;
    return std::pow(std::max(std::abs(diff), floor), p - 2.0);
}

}  // namespace

double weight_floor(const GridFunction& u) {
    const double m = linf_norm(u);
    return 1e-8 * (m > 0.0 ? m : 1.0);
}

Eigen::MatrixXd lagged_operator(const NonlocalKernel& kernel, const GridFunction& u, double floor) {
    const auto n = static_cast<Eigen::Index>(kernel.n());
    const double p = kernel.params().p();
    const auto& K = kernel.pair_weights();
    Eigen::MatrixXd L(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        double diag = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            if (i == j) continue;
            const double w = 2.0 * K(i, j) * weight(u[static_cast<std::size_t>(i)] - u[static_cast<std::size_t>(j)], p, floor);
            L(i, j) = -w;
            diag += w;
        }
        L(j, j) = diag + 2.0 * kernel.E(static_cast<std::size_t>(j)) * weight(u[static_cast<std::size_t>(j)], p, floor);
    }
    return L;
}

Eigen::MatrixXd jacobian(const Problem& prob, const GridFunction& u) {
    const double p = prob.params().p();
    const double floor = weight_floor(u);
    Eigen::MatrixXd J = (p - 1.0) * lagged_operator(prob.kernel(), u, floor);
    const double h = prob.mesh().h();
    const Reaction& f = prob.effective_reaction();
    for (std::size_t i = 0; i < u.size(); ++i) {
        // Leaves with exponent < 2 have unbounded slope at 0; evaluate just off it.
        double t = u[i];
        if (std::abs(t) < floor) t = std::copysign(floor, t == 0.0 ? 1.0 : t);
        const auto k = static_cast<Eigen::Index>(i);
        J(k, k) -= h * f.df(t);
    }
    return J;
}

GridFunction Preconditioner::solve(const GridFunction& u, const GridFunction& g) {
    const bool constant = kernel_->params().p() == 2.0;
    if (!constant || !cached_) {
        cached_.emplace(lagged_operator(*kernel_, u, weight_floor(u)));
        if (cached_->info() != Eigen::Success) {
            cached_.reset();
            throw std::runtime_error("preconditioner: lagged operator is not positive definite");
        }
    }
    Eigen::VectorXd d = cached_->solve(as_vector(g));
    return from_vector(g.mesh(), d);
}

bool normalize_lp(GridFunction& u, double p) {
    const double nrm = lp_norm(u, p);
    if (nrm == 0.0) return false;
    u *= 1.0 / nrm;
    return true;
}

double dot(const GridFunction& u, const GridFunction& v) {
    double acc = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) acc += u[i] * v[i];
    return acc;
}

double distance(const GridFunction& a, const GridFunction& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(acc);
}

GridFunction unit_difference(const GridFunction& a, const GridFunction& b) {
    GridFunction t = a - b;
    const double nrm = std::sqrt(dot(t, t));
    if (nrm > 0.0) t *= 1.0 / nrm;
    return t;
}

void reparametrize(std::vector<GridFunction>& nodes, std::size_t first, std::size_t last,
                   const std::function<bool(GridFunction&)>& project) {
    if (last <= first + 1) return;
    std::vector<double> arc{0.0};
    for (std::size_t k = first + 1; k <= last; ++k) arc.push_back(arc.back() + distance(nodes[k], nodes[k - 1]));
    const double total = arc.back();
    if (total == 0.0) return;
    const std::vector<GridFunction> old(nodes.begin() + static_cast<std::ptrdiff_t>(first),
                                        nodes.begin() + static_cast<std::ptrdiff_t>(last) + 1);
    std::size_t seg = 0;
    for (std::size_t k = first + 1; k < last; ++k) {
        const double target = total * static_cast<double>(k - first) / static_cast<double>(last - first);
        while (seg + 1 < arc.size() - 1 && arc[seg + 1] < target) ++seg;
        const double len = arc[seg + 1] - arc[seg];
        const double w = len > 0.0 ? (target - arc[seg]) / len : 0.0;
        GridFunction v = old[seg];
        v *= 1.0 - w;
        axpy(v, w, old[seg + 1]);
        if (!project || project(v)) nodes[k] = std::move(v);
    }
}

std::size_t highest_node(const std::vector<double>& values) {
    std::size_t c = 1;
    for (std::size_t k = 2; k + 1 < values.size(); ++k)
        if (values[k] > values[c]) c = k;
    return c;
}

}  // namespace fracp::detail
