#pragma once

// Adaptive Gauss-Kronrod (7/15) quadrature, written independently of the
// kernel assembly; used as the reference for the cell weights.

#include <cmath>
#include <functional>

namespace oracle {

namespace gk {
inline constexpr double xk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                                 0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                                 0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                                 0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double wk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                                 0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                                 0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                                 0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double wg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                                 0.381830050505118944950369775488975, 0.417959183673469387755102040816327};
}  // namespace gk

inline void gk15(const std::function<double(double)>& f, double a, double b, double& kronrod, double& gauss) {
    const double c = 0.5 * (a + b), r = 0.5 * (b - a);
    const double fc = f(c);
    kronrod = gk::wk[7] * fc;
    gauss = gk::wg[3] * fc;
    for (int k = 0; k < 7; ++k) {
        const double s = f(c - r * gk::xk[k]) + f(c + r * gk::xk[k]);
        kronrod += gk::wk[k] * s;
        if (k % 2 == 1) gauss += gk::wg[k / 2] * s;
    }
    kronrod *= r;
    gauss *= r;
}

inline double integrate(const std::function<double(double)>& f, double a, double b, double tol, int depth = 0) {
    double k = 0.0, g = 0.0;
    gk15(f, a, b, k, g);
    if (std::abs(k - g) <= tol * std::max(std::abs(k), 1e-300) || depth > 60) return k;
    const double m = 0.5 * (a + b);
    return integrate(f, a, m, tol, depth + 1) + integrate(f, m, b, tol, depth + 1);
}

/// (1/d^p) int_{C_i} int_{C_j} |x - y|^(p-1-sp) dy dx, d = distance of the centers.
inline double pair_weight(double a, double h, int i, int j, double s, double p) {
    const double beta = p - 1.0 - s * p;
    const double d = std::abs(i - j) * h;
    const double yl = a + j * h, yr = yl + h;
    auto inner = [&](double x) {
        return integrate([&](double y) { return std::pow(std::abs(x - y), beta); }, yl, yr, 1e-13);
    };
    return integrate(inner, a + i * h, a + (i + 1) * h, 1e-12) / std::pow(d, p);
}

/// Both endpoints: int_{C_i} (dist/dist_i)^p dist^(-sp) / sp dx.
inline double exterior_weight(double a, double b, double h, int i, double s, double p) {
    const double sp = s * p;
    const double xc = a + (i + 0.5) * h;
    auto f = [&](double x) {
        const double l = x - a, r = b - x;
        return std::pow(l / (xc - a), p) * std::pow(l, -sp) / sp + std::pow(r / (b - xc), p) * std::pow(r, -sp) / sp;
    };
    return integrate(f, a + i * h, a + (i + 1) * h, 1e-13);
}

}  // namespace oracle
