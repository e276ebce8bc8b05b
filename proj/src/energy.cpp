#include "fracp/energy.hpp"

#include <cmath>
#include <stdexcept>

namespace fracp {

const char* to_string(Variant v) noexcept {
    switch (v) {
        case Variant::full: return "full";
        case Variant::plus: return "plus";
        case Variant::minus: return "minus";
    }
    return "?";
}

namespace {

Reaction wrap(const Reaction& r, Variant v) {
    switch (v) {
        case Variant::plus: return Reaction::truncate_plus(r);
        case Variant::minus: return Reaction::truncate_minus(r);
        case Variant::full: break;
    }
    return r;
}

}  // namespace

Problem::Problem(std::shared_ptr<const NonlocalKernel> kernel, Reaction reaction, Variant variant)
    : kernel_(std::move(kernel)), reaction_(std::move(reaction)), variant_(variant), effective_(wrap(reaction_, variant)) {
    if (!kernel_) throw std::invalid_argument("problem: null kernel");
}

Problem::Problem(const Mesh& mesh, const FracParams& params, Reaction reaction, Variant variant)
    : Problem(std::make_shared<const NonlocalKernel>(assemble_kernel(mesh, params)), std::move(reaction), variant) {}

double phi(const Problem& prob, const GridFunction& u) {
    require_same_mesh(prob.mesh(), u, "phi");
    return seminorm_p(prob.kernel(), u) / prob.params().p() - nemytskii_integral(prob.effective_reaction(), u);
}

GridFunction grad_phi(const Problem& prob, const GridFunction& u) {
    require_same_mesh(prob.mesh(), u, "grad_phi");
    GridFunction g = apply_A(prob.kernel(), u);
    const double h = prob.mesh().h();
    const Reaction& f = prob.effective_reaction();
    for (std::size_t i = 0; i < g.size(); ++i) g[i] -= h * f.f(u[i]);
    return g;
}

double dual_norm(const GridFunction& g, double p) {
    const double q = p / (p - 1.0);
    const double h = g.mesh().h();
    const double scale = linf_norm(g);
    if (scale == 0.0) return 0.0;
    double acc = 0.0;
    for (double v : g.values()) acc += std::pow(std::abs(v) / scale, q);
    return scale * std::pow(acc / std::pow(h, q - 1.0), 1.0 / q);
}

double residual_norm(const Problem& prob, const GridFunction& u) {
    return dual_norm(grad_phi(prob, u), prob.params().p());
}

}  // namespace fracp
