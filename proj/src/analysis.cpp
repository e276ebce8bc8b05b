#include "fracp/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace fracp {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

DeGiorgiTrace trace(const GridFunction& v, double r, double rho, std::size_t max_n) {
    DeGiorgiTrace tr;
    tr.rho = rho;
    const double h = v.mesh().h();
    std::vector<double> shifted(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) shifted[i] = v[i] - 1.0;
    for (std::size_t n = 0; n <= max_n; ++n) {
        const double lift = std::ldexp(1.0, -static_cast<int>(n));
        double acc = 0.0;
        for (double w : shifted) {
            const double t = w + lift;
            if (t > 0.0) acc += std::pow(t, r);
        }
        const double R = h * acc;
        if (!tr.levels.empty() && R > tr.levels.back()) tr.monotone = false;
        if (!tr.n_star && R < kDeGiorgiZero) tr.n_star = n;
        tr.levels.push_back(R);
    }
    tr.converged = tr.n_star.has_value();
    return tr;
}

}  // namespace

DeGiorgiReport degiorgi_iterate(const GridFunction& u, double r, std::size_t max_n) {
    if (!(r >= 1.0) || !std::isfinite(r)) throw std::invalid_argument("degiorgi_iterate: require r >= 1");
    DeGiorgiReport rep{.r = r};
    const double nr = lp_norm(u, r);
    if (nr == 0.0) {
        rep.positive.levels.assign(max_n + 1, 0.0);
        rep.positive.converged = true;
        rep.positive.n_star = 0;
        rep.negative = rep.positive;
        return rep;
    }
    const double rho = std::max(1.0, 1.0 / nr);
    const GridFunction v = (1.0 / (rho * nr)) * u;
    rep.positive = trace(v, r, rho, max_n);
    rep.negative = trace(-v, r, rho, max_n);
    return rep;
}

LinftyReport linfty_bound_report(const GridFunction& u, double r) {
    LinftyReport rep;
    rep.linf = linf_norm(u);
    rep.lr = lp_norm(u, r);
    rep.ratio = rep.linf / (1.0 + rep.lr);
    return rep;
}

LinftyFit fit_linfty_bound(const std::vector<LinftyReport>& batch) {
    std::vector<double> xs, ys;
    for (const auto& b : batch) {
        if (!(b.linf > 0.0)) continue;
        xs.push_back(std::log1p(b.lr));
        ys.push_back(std::log(b.linf));
    }
    const auto m = static_cast<double>(xs.size());
    if (xs.size() < 2) throw std::invalid_argument("fit_linfty_bound: need two nonzero reports");
    double mx = 0.0, my = 0.0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        mx += xs[k] / m;
        my += ys[k] / m;
    }
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        sxx += (xs[k] - mx) * (xs[k] - mx);
        sxy += (xs[k] - mx) * (ys[k] - my);
    }
    if (!(sxx > 0.0)) throw std::invalid_argument("fit_linfty_bound: ||u||_r takes a single value");
    LinftyFit fit;
    fit.count = xs.size();
    fit.alpha = sxy / sxx;
    const double logK = my - fit.alpha * mx;
    fit.K = std::exp(logK);
    double ss = 0.0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        const double e = ys[k] - logK - fit.alpha * xs[k];
        ss += e * e;
    }
    fit.rms = std::sqrt(ss / m);
    char buf[160];
    std::snprintf(buf, sizeof buf, "||u||_inf ~ %.6g (1 + ||u||_r)^%.6g over %zu solutions (log rms %.3g)", fit.K,
                  fit.alpha, fit.count, fit.rms);
    fit.statement = buf;
    return fit;
}

const char* to_string(DeficitSign s) noexcept {
    switch (s) {
        case DeficitSign::negative: return "negative";
        case DeficitSign::zero: return "zero";
        case DeficitSign::positive: return "positive";
    }
    return "?";
}

double pohozaev_integrand(const Reaction& r, const FracParams& params, double t) {
    const double p = params.p();
    const double crit = params.critical_exponent();
    auto leaf = [&](double c, double e) {
        if (t == 0.0) return 0.0;
        if (std::isfinite(crit) && std::abs(e - crit) <= 1e-12 * crit) return 0.0;
        return c * std::pow(std::abs(t), e) * ((1.0 - params.sp()) / p - 1.0 / e);
    };
    return std::visit(overloaded{
                          [&](const PowerTerm& l) { return leaf(l.c, l.r); },
                          [&](const EigenTerm& l) { return leaf(l.lambda, l.p); },
                          [&](const SumTerm& s) {
                              double acc = 0.0;
                              for (const auto& term : s.terms) acc += pohozaev_integrand(term, params, t);
                              return acc;
                          },
                          [&](const TruncatePlus& w) { return pohozaev_integrand(w.inner, params, std::max(t, 0.0)); },
                          [&](const TruncateMinus& w) { return pohozaev_integrand(w.inner, params, std::min(t, 0.0)); },
                      },
                      r.node().term);
}

GridFunction dilate(const GridFunction& u, double theta) {
    if (!(theta > 0.0) || !std::isfinite(theta)) throw std::invalid_argument("dilate: theta must be positive");
    const Mesh& mesh = u.mesh();
    const Mesh target = mesh.dilated(1.0 / theta);
    GridFunction out(target);
    const std::size_t n = mesh.n();
    const double h = mesh.h();
    for (std::size_t i = 0; i < n; ++i) {
        const double y = theta * target.center(i);
        if (y <= mesh.a() || y >= mesh.b()) continue;
        const double s = (y - mesh.a()) / h - 0.5;  // fractional center index
        if (s <= 0.0) {
            out[i] = u[0];
        } else if (s >= static_cast<double>(n - 1)) {
            out[i] = u[n - 1];
        } else {
            const auto k = static_cast<std::size_t>(s);
            const double w = s - static_cast<double>(k);
            out[i] = (1.0 - w) * u[k] + w * u[k + 1];
        }
    }
    return out;
}

PohozaevReport pohozaev_deficit(const Problem& prob, const GridFunction& u, double gamma) {
    if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("pohozaev_deficit: require 0 < gamma < 1");
    require_same_mesh(prob.mesh(), u, "pohozaev_deficit");
    const FracParams& params = prob.params();
    const Reaction& f = prob.effective_reaction();
    const Mesh& mesh = prob.mesh();
    PohozaevReport rep;
    rep.gamma = gamma;

    double acc = 0.0;
    for (double v : u.values()) acc += pohozaev_integrand(f, params, v);
    rep.interior_deficit = mesh.h() * acc;
    rep.verdict = rep.interior_deficit > 0.0   ? DeficitSign::positive
                  : rep.interior_deficit < 0.0 ? DeficitSign::negative
                                               : DeficitSign::zero;

    rep.scaling_derivative =
        (params.sp() - 1.0) / params.p() * seminorm_p(prob.kernel(), u) + nemytskii_integral(f, u);

    constexpr double delta = 0.01;
    auto energy_at = [&](double theta) {
        const GridFunction w = dilate(u, theta);
        return phi(Problem(w.mesh(), params, prob.reaction(), prob.variant()), w);
    };
    rep.scaling_derivative_fd = (energy_at(1.0 + delta) - energy_at(1.0 - delta)) / (2.0 * delta);
    const double scale = std::abs(rep.scaling_derivative);
    const double diff = std::abs(rep.scaling_derivative_fd - rep.scaling_derivative);
    rep.fd_relative_error = scale > 0.0 ? diff / scale : diff;

    const double d = 0.5 * mesh.h();
    rep.boundary_profile = {u[0] / std::pow(d, gamma), u[u.size() - 1] / std::pow(d, gamma)};
    return rep;
}

const char* to_string(NonexistenceVerdict v) noexcept {
    switch (v) {
        case NonexistenceVerdict::nonexistence_predicted: return "nonexistence_predicted";
        case NonexistenceVerdict::strict_nonexistence_predicted: return "strict_nonexistence_predicted";
        case NonexistenceVerdict::inconclusive: return "inconclusive";
    }
    return "?";
}

NonexistenceReport nonexistence_check(const Reaction& r, const FracParams& params, std::pair<double, double> t_range,
                                      std::size_t samples) {
    if (!(params.sp() < 1.0)) throw std::invalid_argument("nonexistence_check: require sp < 1");
    const auto [lo, hi] = t_range;
    if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi))
        throw std::invalid_argument("nonexistence_check: require a finite range lo < hi");
    if (samples < 2) throw std::invalid_argument("nonexistence_check: require samples >= 2");
    NonexistenceReport rep;
    rep.critical_exponent = params.critical_exponent();
    rep.min_value = std::numeric_limits<double>::infinity();
    bool strict = true;
    for (std::size_t k = 0; k < samples; ++k) {
        const double w = static_cast<double>(k) / static_cast<double>(samples - 1);
        const double t = lo > 0.0 ? lo * std::pow(hi / lo, w) : lo + (hi - lo) * w;
        if (t == 0.0) continue;
        const double q = pohozaev_integrand(r, params, t);
        rep.min_value = std::min(rep.min_value, q);
        if (q <= 0.0) strict = false;
        if (q < 0.0 && rep.witnesses.size() < 16) rep.witnesses.push_back({t, q});
    }
    if (rep.min_value < 0.0) {
        rep.verdict = NonexistenceVerdict::inconclusive;
    } else {
        rep.verdict = strict ? NonexistenceVerdict::strict_nonexistence_predicted
                             : NonexistenceVerdict::nonexistence_predicted;
    }
    return rep;
}

}  // namespace fracp
