#pragma once

#include <memory>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "fracp/mesh.hpp"

namespace fracp {

struct ReactionNode;

/// Autonomous nonlinearity f(t) with exact primitive F(t), built from
/// closed-form leaves and linear/truncation combinators. Cheap to copy;
/// the tree is shared and immutable.
class Reaction {
public:
    /// f(t) = c |t|^(r-2) t, r > 1.
    static Reaction power(double c, double r);
    /// f(t) = lambda |t|^(p-2) t.
    static Reaction eigen(double lambda, double p);
    static Reaction sum(std::vector<Reaction> terms);
    /// t -> inner(t^+)
    static Reaction truncate_plus(Reaction inner);
    /// t -> inner(-t^-) = inner(min(t, 0))
    static Reaction truncate_minus(Reaction inner);
    /// f = 0.
    static Reaction zero();

    const ReactionNode& node() const noexcept { return *node_; }

    double f(double t) const noexcept;
    double F(double t) const noexcept;
    /// df/dt; unbounded near 0 for leaves with exponent below 2.
    double df(double t) const noexcept;

    /// True when f(-t) = -f(t) for the whole tree (no truncations).
    bool is_odd() const noexcept;

private:
    explicit Reaction(std::shared_ptr<const ReactionNode> node) : node_(std::move(node)) {}
    std::shared_ptr<const ReactionNode> node_;
};

struct PowerTerm {
    double c;
    double r;
};
struct EigenTerm {
    double lambda;
    double p;
};
struct SumTerm {
    std::vector<Reaction> terms;
};
struct TruncatePlus {
    Reaction inner;
};
struct TruncateMinus {
    Reaction inner;
};

struct ReactionNode {
    std::variant<PowerTerm, EigenTerm, SumTerm, TruncatePlus, TruncateMinus> term;
};

inline double f_eval(const Reaction& r, double t) noexcept { return r.f(t); }
inline double F_eval(const Reaction& r, double t) noexcept { return r.F(t); }

/// h sum_i F(u_i).
double nemytskii_integral(const Reaction& r, const GridFunction& u);

/// Outcome of sampling 0 < mu F(t) <= f(t) t on +-[R, 100 R].
struct ArReport {
    bool holds = true;
    struct Witness {
        double t;
        double mu_F;
        double f_t;
    };
    std::vector<Witness> failures;
};
ArReport check_ar_condition(const Reaction& r, double mu, double R, std::size_t samples);

/// |f(t)| <= a (1 + |t|^(r-1)) with a and r read off the leaves.
struct GrowthAudit {
    double a = 0.0;
    double r = 0.0;  // largest leaf exponent (>= 1; 1 for f = 0)
    bool holds = true;
    double worst_ratio = 0.0;  // max |f(t)| / (a (1 + |t|^(r-1))) over the samples
};
GrowthAudit audit_growth(const Reaction& r, double t_max = 100.0, std::size_t samples = 2001);

/// Sampled limsup_{|t| -> inf} p F(t) / |t|^p, the slope compared against lambda_1
/// for coercivity.
double asymptotic_slope(const Reaction& r, double p);

nlohmann::json to_json(const Reaction& r);
/// Strict parser: exactly one key per node, known keys only.
Reaction reaction_from_json(const nlohmann::json& j);
std::string describe(const Reaction& r);

}  // namespace fracp
