#include "fracp/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>
#include <vector>

namespace fracp {

FracParams::FracParams(double s, double p) : s_(s), p_(p), sp_(s * p) {
    if (!(s > 0.0 && s < 1.0)) throw std::invalid_argument("params: require 0 < s < 1");
    if (!(p > 1.0) || !std::isfinite(p)) throw std::invalid_argument("params: require 1 < p < inf");
}

double FracParams::critical_exponent() const noexcept {
    if (sp_ < 1.0) return p_ / (1.0 - sp_);
    return std::numeric_limits<double>::infinity();
}

NonlocalKernel::NonlocalKernel(Mesh mesh, FracParams params, Eigen::MatrixXd pair,
                               Eigen::VectorXd exterior)
    : mesh_(mesh), params_(params), pair_(std::move(pair)), exterior_(std::move(exterior)) {
    const auto n = static_cast<Eigen::Index>(mesh_.n());
    if (pair_.rows() != n || pair_.cols() != n || exterior_.size() != n)
        throw std::invalid_argument("kernel: weight dimensions do not match mesh");
}

namespace detail {

namespace {

// Second difference (k+1)^g - 2 k^g + (k-1)^g for k >= 1.
double second_difference(double k, double g) {
    if (k < 8.0) return std::pow(k + 1.0, g) - 2.0 * std::pow(k, g) + std::pow(k - 1.0, g);
    // Taylor series in 1/k; the direct form cancels badly for large k.
    const double inv2 = 1.0 / (k * k);
    double coeff = g * (g - 1.0);  // g (g-1) ... (g-2m+1) for m = 1
    double fact = 2.0;             // (2m)!
    double scale = 1.0;            // k^(-2(m-1))
    double sum = 0.0;
    for (int m = 1; m <= 40; ++m) {
        const double term = 2.0 * coeff / fact * scale;
        sum += term;
        if (std::abs(term) <= 1e-18 * std::abs(sum)) break;
        const double j = 2.0 * m;
        coeff *= (g - j) * (g - j - 1.0);
        fact *= (j + 1.0) * (j + 2.0);
        scale *= inv2;
    }
    return std::pow(k, g - 2.0) * sum;
}

}  // namespace

double pair_weight(std::size_t k, double h, double s, double p) {
    const double sp = s * p;
    const double beta = p - 1.0 - sp;  // > -1
    const double g = beta + 2.0;
    const double kk = static_cast<double>(k);
    const double diff = second_difference(kk, g);
    return std::pow(h, 1.0 - sp) * diff / ((beta + 1.0) * (beta + 2.0) * std::pow(kk, p));
}

double exterior_weight_one_side(std::size_t i, double h, double s, double p) {
    const double sp = s * p;
    const double g = p - sp + 1.0;
    const double ii = static_cast<double>(i);
    // (i+1)^g - i^g without cancellation.
    const double rise = i == 0 ? 1.0 : std::pow(ii, g) * std::expm1(g * std::log1p(1.0 / ii));
    return std::pow(h, 1.0 - sp) * rise / (sp * g * std::pow(ii + 0.5, p));
}

}  // namespace detail

NonlocalKernel assemble_kernel(const Mesh& mesh, const FracParams& params, unsigned threads) {
    const std::size_t n = mesh.n();
    const double h = mesh.h();
    const double s = params.s();
    const double p = params.p();

    // Uniform grid: K is Toeplitz, one weight per offset.
    std::vector<double> by_offset(n, 0.0);
    for (std::size_t k = 1; k < n; ++k) by_offset[k] = detail::pair_weight(k, h, s, p);

    Eigen::MatrixXd pair(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    auto fill_columns = [&](std::size_t begin, std::size_t end) {
        for (std::size_t j = begin; j < end; ++j)
            for (std::size_t i = 0; i < n; ++i)
                pair(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                    by_offset[i > j ? i - j : j - i];
    };
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)));
    if (threads == 1) {
        fill_columns(0, n);
    } else {
        std::vector<std::jthread> pool;
        const std::size_t chunk = (n + threads - 1) / threads;
        for (std::size_t b = 0; b < n; b += chunk) pool.emplace_back(fill_columns, b, std::min(n, b + chunk));
    }

    Eigen::VectorXd exterior(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        // Left endpoint sees cell i at offset i, right endpoint at offset n-1-i.
        exterior(static_cast<Eigen::Index>(i)) = detail::exterior_weight_one_side(i, h, s, p) +
                                                 detail::exterior_weight_one_side(n - 1 - i, h, s, p);
    }
    return NonlocalKernel(mesh, params, std::move(pair), std::move(exterior));
}

double seminorm_p(const NonlocalKernel& kernel, const GridFunction& u) {
    require_same_mesh(kernel.mesh(), u, "seminorm_p");
    const std::size_t n = kernel.n();
    const double p = kernel.params().p();
    const auto& K = kernel.pair_weights();
    double pairs = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        double col = 0.0;
        for (std::size_t i = j + 1; i < n; ++i)
            col += K(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) * std::pow(std::abs(u[i] - u[j]), p);
        pairs += col;
    }
    double ext = 0.0;
    for (std::size_t i = 0; i < n; ++i) ext += kernel.E(i) * std::pow(std::abs(u[i]), p);
    return 2.0 * pairs + 2.0 * ext;
}

GridFunction apply_A(const NonlocalKernel& kernel, const GridFunction& u) {
    require_same_mesh(kernel.mesh(), u, "apply_A");
    const std::size_t n = kernel.n();
    const double p = kernel.params().p();
    const auto& K = kernel.pair_weights();
    std::vector<double> w(n);
    // K is symmetric and column-major, so column i holds row i.
    for (std::size_t i = 0; i < n; ++i) {
        const double* Ki = K.data() + i * n;
        const double ui = u[i];
        double acc = 0.0;
        if (p == 2.0) {
            for (std::size_t j = 0; j < n; ++j) acc += Ki[j] * (ui - u[j]);
        } else {
            for (std::size_t j = 0; j < n; ++j) acc += Ki[j] * signed_power(ui - u[j], p);
        }
        w[i] = 2.0 * acc + 2.0 * kernel.E(i) * signed_power(ui, p);
    }
    return GridFunction(u.mesh(), std::move(w));
}

double pairing(const NonlocalKernel& kernel, const GridFunction& u, const GridFunction& v) {
    require_same_mesh(kernel.mesh(), u, "pairing");
    require_same_mesh(kernel.mesh(), v, "pairing");
    const std::size_t n = kernel.n();
    const double p = kernel.params().p();
    const auto& K = kernel.pair_weights();
    double pairs = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        double col = 0.0;
        for (std::size_t i = j + 1; i < n; ++i)
            col += K(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) * signed_power(u[i] - u[j], p) *
                   (v[i] - v[j]);
        pairs += col;
    }
    double ext = 0.0;
    for (std::size_t i = 0; i < n; ++i) ext += kernel.E(i) * signed_power(u[i], p) * v[i];
    return 2.0 * pairs + 2.0 * ext;
}

}  // namespace fracp
