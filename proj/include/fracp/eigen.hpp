#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fracp/kernel.hpp"

namespace fracp {

struct EigenResult {
    double lambda = 0.0;
    /// Normalized so that h sum |u_i|^p = 1.
    GridFunction eigenfunction;
    std::size_t iterations = 0;
    double residual = 0.0;
    bool converged = false;
    /// Rayleigh quotient per iteration (for lambda2_approx: the path maximum).
    std::vector<double> history;
};

/// S(u) / (h sum |u_i|^p); u must be nonzero.
double rayleigh_quotient(const NonlocalKernel& kernel, const GridFunction& u);

/// A(u) - lambda h |u|^(p-2) u.
GridFunction eigen_residual(const NonlocalKernel& kernel, const GridFunction& u, double lambda);

/// Smallest eigenvalue by preconditioned, normalized Rayleigh descent from u = 1.
///
/// Each step moves along -L(u)^{-1} (A(u) - R(u) h |u|^(p-2) u), where L(u) is
/// the lagged-weight linearization of A (for p = 2 this is inverse iteration),
/// renormalizes, and backtracks by halving until the Rayleigh quotient has
/// decreased sufficiently. Stops when the eigen-residual proxy drops below tol.
/// max_iter = 0 selects 50 n.
EigenResult lambda1(const NonlocalKernel& kernel, double tol = 1e-10, std::size_t max_iter = 0);

/// Minimax over paths on the unit L^p sphere joining phi_1 to -phi_1 of the
/// maximal Rayleigh quotient along the path.
///
/// The path is relaxed by a climbing string method: interior nodes move along
/// the preconditioned descent direction with its tangential part removed and
/// are redistributed to equal arc length, while the highest node (lowest index
/// on ties) has its tangential part reversed so it converges to the saddle.
/// Once the highest node settles, it is refined alone against frozen neighbors.
/// An upper-bound approximation of the second variational eigenvalue; exact
/// for p = 2. `first` may supply an already computed lambda1 result.
EigenResult lambda2_approx(const NonlocalKernel& kernel, double tol = 1e-10, std::size_t max_iter = 0,
                           std::size_t path_points = 17, const EigenResult* first = nullptr);

enum class SpectralKind { first, higher };

struct SpectralReport {
    SpectralKind kind = SpectralKind::first;
    bool constant_sign = false;  // all values strictly of one sign
    bool sign_change = false;    // some u_i u_{i+1} < 0
    /// kind = first: lambda <= every random Rayleigh probe (with 1e-12 relative slack).
    bool minimal_among_probes = true;
    double min_probe = 0.0;
    /// linf_norm / lp_norm(p) of the eigenfunction.
    double boundedness_ratio = 0.0;
    bool passed = false;
    std::vector<std::string> failures;
};

SpectralReport check_spectral_properties(const NonlocalKernel& kernel, const EigenResult& result, SpectralKind kind,
                                         std::uint64_t seed = 12345, std::size_t probes = 50);

}  // namespace fracp
