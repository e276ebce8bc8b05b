#pragma once

#include <memory>

#include "fracp/kernel.hpp"
#include "fracp/reaction.hpp"

namespace fracp {

enum class Variant { full, plus, minus };

const char* to_string(Variant v) noexcept;

/// Energy Phi(u) = S(u)/p - int F(u) for one kernel and reaction. The plus and
/// minus variants evaluate the reaction at u^+ and -u^- but keep the full
/// seminorm term.
class Problem {
public:
    Problem(std::shared_ptr<const NonlocalKernel> kernel, Reaction reaction, Variant variant = Variant::full);
    Problem(const Mesh& mesh, const FracParams& params, Reaction reaction, Variant variant = Variant::full);

    const NonlocalKernel& kernel() const noexcept { return *kernel_; }
    const std::shared_ptr<const NonlocalKernel>& shared_kernel() const noexcept { return kernel_; }
    const Mesh& mesh() const noexcept { return kernel_->mesh(); }
    const FracParams& params() const noexcept { return kernel_->params(); }
    const Reaction& reaction() const noexcept { return reaction_; }
    Variant variant() const noexcept { return variant_; }
    /// The reaction with the variant's truncation applied.
    const Reaction& effective_reaction() const noexcept { return effective_; }

    /// Same kernel and reaction, different variant.
    Problem with_variant(Variant v) const { return Problem(kernel_, reaction_, v); }

private:
    std::shared_ptr<const NonlocalKernel> kernel_;
    Reaction reaction_;
    Variant variant_;
    Reaction effective_;
};

double phi(const Problem& prob, const GridFunction& u);

/// g_i = apply_A(u)_i - h f(u_i); zero exactly at discrete weak solutions.
GridFunction grad_phi(const Problem& prob, const GridFunction& u);

/// Weighted l^{p'} proxy for the dual norm: (sum |g_i|^{p'} / h^{p'-1})^{1/p'}.
double dual_norm(const GridFunction& g, double p);
double residual_norm(const Problem& prob, const GridFunction& u);

}  // namespace fracp
