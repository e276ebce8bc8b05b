#pragma once

#include <cmath>

#include <Eigen/Dense>

#include "fracp/mesh.hpp"

namespace fracp {

/// Fractional order s in (0,1) and integrability exponent p in (1,inf).
class FracParams {
public:
    FracParams(double s, double p);

    double s() const noexcept { return s_; }
    double p() const noexcept { return p_; }
    double sp() const noexcept { return sp_; }
    /// p / (1 - sp) in one dimension when sp < 1, +inf otherwise.
    double critical_exponent() const noexcept;
    /// Conjugate exponent p / (p - 1).
    double dual_exponent() const noexcept { return p_ / (p_ - 1.0); }

    friend bool operator==(const FracParams&, const FracParams&) = default;

private:
    double s_;
    double p_;
    double sp_;
};

/// Dense pair weights K and exterior weights E for a mesh and (s, p).
///
/// The discrete p-th power of the Gagliardo seminorm is
///
///   S(u) = sum_{i != j} K_ij |u_i - u_j|^p + 2 sum_i E_i |u_i|^p.
///
/// The weights come from a local linear model of u across a cell pair:
/// for x in C_i, y in C_j, |u(x) - u(y)| is taken as |u_i - u_j| |x - y| / d_ij,
/// which turns the singular kernel |x - y|^(-1-sp) into the integrable
/// |x - y|^(p-1-sp) / d_ij^p and gives closed forms for every 0 < s < 1 < p.
/// Exterior weights use the same model against each endpoint. All weights
/// are homogeneous of degree 1 - sp under dilation of the interval.
class NonlocalKernel {
public:
    NonlocalKernel(Mesh mesh, FracParams params, Eigen::MatrixXd pair, Eigen::VectorXd exterior);

    const Mesh& mesh() const noexcept { return mesh_; }
    const FracParams& params() const noexcept { return params_; }
    std::size_t n() const noexcept { return mesh_.n(); }

    const Eigen::MatrixXd& pair_weights() const noexcept { return pair_; }
    const Eigen::VectorXd& exterior_weights() const noexcept { return exterior_; }
    double K(std::size_t i, std::size_t j) const noexcept {
        return pair_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
    double E(std::size_t i) const noexcept { return exterior_(static_cast<Eigen::Index>(i)); }

private:
    Mesh mesh_;
    FracParams params_;
    Eigen::MatrixXd pair_;
    Eigen::VectorXd exterior_;
};

/// Threads > 1 splits the pair loop over diagonals; the result does not depend on it.
NonlocalKernel assemble_kernel(const Mesh& mesh, const FracParams& params, unsigned threads = 1);

namespace detail {
/// Weight for two cells k >= 1 cells apart on a grid of width h.
double pair_weight(std::size_t k, double h, double s, double p);
/// Exterior weight of cell i against the endpoint that is i + 1/2 cells away.
double exterior_weight_one_side(std::size_t i, double h, double s, double p);
}  // namespace detail

/// S(u) = ||u||^p in the discrete seminorm.
double seminorm_p(const NonlocalKernel& kernel, const GridFunction& u);

/// Gradient of u -> S(u)/p:
///   w_i = 2 sum_{j != i} K_ij phi(u_i - u_j) + 2 E_i phi(u_i),  phi(t) = |t|^(p-2) t.
GridFunction apply_A(const NonlocalKernel& kernel, const GridFunction& u);

/// <A(u), v> = sum_i apply_A(u)_i v_i, evaluated from the pair form.
double pairing(const NonlocalKernel& kernel, const GridFunction& u, const GridFunction& v);

/// |t|^(p-2) t with the value 0 at t = 0 for every p > 1.
inline double signed_power(double t, double p) noexcept {
    if (t == 0.0) return 0.0;
    const double a = std::abs(t);
    return (t > 0.0 ? 1.0 : -1.0) * std::pow(a, p - 1.0);
}

}  // namespace fracp
