#include "fracp/reaction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace fracp {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

double leaf_f(double c, double r, double t) noexcept {
    if (t == 0.0) return 0.0;
    const double a = std::abs(t);
    return c * std::copysign(std::pow(a, r - 1.0), t);
}

double leaf_F(double c, double r, double t) noexcept { return t == 0.0 ? 0.0 : c * std::pow(std::abs(t), r) / r; }

double leaf_df(double c, double r, double t) noexcept {
    if (r == 2.0) return c;
    if (t == 0.0) return r > 2.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), c);
    return c * (r - 1.0) * std::pow(std::abs(t), r - 2.0);
}

double check_exponent(double r, const char* what) {
    if (!(r > 1.0) || !std::isfinite(r)) throw std::invalid_argument(std::string(what) + ": exponent must be > 1");
    return r;
}

double check_finite(double v, const char* what) {
    if (!std::isfinite(v)) throw std::invalid_argument(std::string(what) + ": coefficient must be finite");
    return v;
}

}  // namespace

Reaction Reaction::power(double c, double r) {
    return Reaction(std::make_shared<const ReactionNode>(
        ReactionNode{PowerTerm{check_finite(c, "power"), check_exponent(r, "power")}}));
}

Reaction Reaction::eigen(double lambda, double p) {
    return Reaction(std::make_shared<const ReactionNode>(
        ReactionNode{EigenTerm{check_finite(lambda, "eigen"), check_exponent(p, "eigen")}}));
}

Reaction Reaction::sum(std::vector<Reaction> terms) {
    return Reaction(std::make_shared<const ReactionNode>(ReactionNode{SumTerm{std::move(terms)}}));
}

Reaction Reaction::truncate_plus(Reaction inner) {
    return Reaction(std::make_shared<const ReactionNode>(ReactionNode{TruncatePlus{std::move(inner)}}));
}

Reaction Reaction::truncate_minus(Reaction inner) {
    return Reaction(std::make_shared<const ReactionNode>(ReactionNode{TruncateMinus{std::move(inner)}}));
}

Reaction Reaction::zero() { return sum({}); }

double Reaction::f(double t) const noexcept {
    return std::visit(overloaded{
                          [t](const PowerTerm& l) { return leaf_f(l.c, l.r, t); },
                          [t](const EigenTerm& l) { return leaf_f(l.lambda, l.p, t); },
                          [t](const SumTerm& l) {
                              double acc = 0.0;
                              for (const auto& term : l.terms) acc += term.f(t);
                              return acc;
                          },
                          [t](const TruncatePlus& l) { return l.inner.f(std::max(t, 0.0)); },
                          [t](const TruncateMinus& l) { return l.inner.f(std::min(t, 0.0)); },
                      },
                      node_->term);
}

double Reaction::F(double t) const noexcept {
    return std::visit(overloaded{
                          [t](const PowerTerm& l) { return leaf_F(l.c, l.r, t); },
                          [t](const EigenTerm& l) { return leaf_F(l.lambda, l.p, t); },
                          [t](const SumTerm& l) {
                              double acc = 0.0;
                              for (const auto& term : l.terms) acc += term.F(t);
                              return acc;
                          },
                          [t](const TruncatePlus& l) { return l.inner.F(std::max(t, 0.0)); },
                          [t](const TruncateMinus& l) { return l.inner.F(std::min(t, 0.0)); },
                      },
                      node_->term);
}

double Reaction::df(double t) const noexcept {
    return std::visit(overloaded{
                          [t](const PowerTerm& l) { return leaf_df(l.c, l.r, t); },
                          [t](const EigenTerm& l) { return leaf_df(l.lambda, l.p, t); },
                          [t](const SumTerm& l) {
                              double acc = 0.0;
                              for (const auto& term : l.terms) acc += term.df(t);
                              return acc;
                          },
                          [t](const TruncatePlus& l) { return t > 0.0 ? l.inner.df(t) : 0.0; },
                          [t](const TruncateMinus& l) { return t < 0.0 ? l.inner.df(t) : 0.0; },
                      },
                      node_->term);
}

bool Reaction::is_odd() const noexcept {
    return std::visit(overloaded{
                          [](const PowerTerm&) { return true; },
                          [](const EigenTerm&) { return true; },
                          [](const SumTerm& l) {
                              return std::all_of(l.terms.begin(), l.terms.end(),
                                                 [](const Reaction& r) { return r.is_odd(); });
                          },
                          [](const TruncatePlus&) { return false; },
                          [](const TruncateMinus&) { return false; },
                      },
                      node_->term);
}

double nemytskii_integral(const Reaction& r, const GridFunction& u) {
    double acc = 0.0;
    for (double v : u.values()) acc += r.F(v);
    return u.mesh().h() * acc;
}

ArReport check_ar_condition(const Reaction& r, double mu, double R, std::size_t samples) {
    if (!(mu > 1.0)) throw std::invalid_argument("check_ar_condition: require mu > 1");
    if (!(R > 0.0)) throw std::invalid_argument("check_ar_condition: require R > 0");
    samples = std::max<std::size_t>(samples, 2);
    ArReport report;
    for (std::size_t k = 0; k < samples; ++k) {
        // log-spaced magnitudes on [R, 100 R]
        const double mag = R * std::pow(100.0, static_cast<double>(k) / static_cast<double>(samples - 1));
        for (double t : {mag, -mag}) {
            const double muF = mu * r.F(t);
            const double ft = r.f(t) * t;
            if (!(muF > 0.0 && muF <= ft)) {
                report.holds = false;
                report.failures.push_back({t, muF, ft});
            }
        }
    }
    return report;
}

namespace {

void collect_growth(const Reaction& r, double& a, double& rmax) {
    std::visit(overloaded{
                   [&](const PowerTerm& l) {
                       a += std::abs(l.c);
                       rmax = std::max(rmax, l.r);
                   },
                   [&](const EigenTerm& l) {
                       a += std::abs(l.lambda);
                       rmax = std::max(rmax, l.p);
                   },
                   [&](const SumTerm& l) {
                       for (const auto& term : l.terms) collect_growth(term, a, rmax);
                   },
                   [&](const TruncatePlus& l) { collect_growth(l.inner, a, rmax); },
                   [&](const TruncateMinus& l) { collect_growth(l.inner, a, rmax); },
               },
               r.node().term);
}

}  // namespace

GrowthAudit audit_growth(const Reaction& r, double t_max, std::size_t samples) {
    GrowthAudit audit;
    audit.r = 1.0;
    collect_growth(r, audit.a, audit.r);
    samples = std::max<std::size_t>(samples, 2);
    for (std::size_t k = 0; k < samples; ++k) {
        const double t = -t_max + 2.0 * t_max * static_cast<double>(k) / static_cast<double>(samples - 1);
        const double bound = audit.a * (1.0 + std::pow(std::abs(t), audit.r - 1.0));
        const double fv = std::abs(r.f(t));
        if (bound > 0.0) audit.worst_ratio = std::max(audit.worst_ratio, fv / bound);
        else if (fv > 0.0) audit.worst_ratio = std::numeric_limits<double>::infinity();
    }
    // Sum of leaves c |t|^(q-1) with q <= r is bounded by sum |c| (1 + |t|^(r-1)).
    audit.holds = audit.worst_ratio <= 1.0 + 1e-12;
    return audit;
}

double asymptotic_slope(const Reaction& r, double p) {
    double slope = -std::numeric_limits<double>::infinity();
    for (double mag : {1e4, 1e6, 1e8})
        for (double t : {mag, -mag}) slope = std::max(slope, p * r.F(t) / std::pow(mag, p));
    return slope;
}

nlohmann::json to_json(const Reaction& r) {
    using nlohmann::json;
    return std::visit(overloaded{
                          [](const PowerTerm& l) { return json{{"power", {{"c", l.c}, {"r", l.r}}}}; },
                          [](const EigenTerm& l) { return json{{"eigen", {{"lambda", l.lambda}, {"p", l.p}}}}; },
                          [](const SumTerm& l) {
                              json arr = json::array();
                              for (const auto& term : l.terms) arr.push_back(to_json(term));
                              return json{{"sum", arr}};
                          },
                          [](const TruncatePlus& l) { return json{{"truncate_plus", to_json(l.inner)}}; },
                          [](const TruncateMinus& l) { return json{{"truncate_minus", to_json(l.inner)}}; },
                      },
                      r.node().term);
}

namespace {

double require_number(const nlohmann::json& obj, const char* key, const std::string& where) {
    if (!obj.contains(key)) throw std::invalid_argument(where + ": missing field '" + key + "'");
    const auto& v = obj.at(key);
    if (!v.is_number()) throw std::invalid_argument(where + "." + key + ": expected a number");
    return v.get<double>();
}

void require_only(const nlohmann::json& obj, std::initializer_list<const char*> keys, const std::string& where) {
    if (!obj.is_object()) throw std::invalid_argument(where + ": expected an object");
    for (const auto& [k, _] : obj.items()) {
        if (std::none_of(keys.begin(), keys.end(), [&](const char* allowed) { return k == allowed; }))
            throw std::invalid_argument(where + ": unknown field '" + k + "'");
    }
}

Reaction parse(const nlohmann::json& j, const std::string& where) {
    if (!j.is_object() || j.size() != 1)
        throw std::invalid_argument(where + ": reaction node must be an object with exactly one key");
    const std::string key = j.begin().key();
    const nlohmann::json& body = j.begin().value();
    const std::string here = where + "." + key;
    try {
        if (key == "power") {
            require_only(body, {"c", "r"}, here);
            return Reaction::power(require_number(body, "c", here), require_number(body, "r", here));
        }
        if (key == "eigen") {
            require_only(body, {"lambda", "p"}, here);
            return Reaction::eigen(require_number(body, "lambda", here), require_number(body, "p", here));
        }
        if (key == "sum") {
            if (!body.is_array()) throw std::invalid_argument(here + ": expected an array");
            std::vector<Reaction> terms;
            for (std::size_t i = 0; i < body.size(); ++i)
                terms.push_back(parse(body[i], here + "[" + std::to_string(i) + "]"));
            return Reaction::sum(std::move(terms));
        }
        if (key == "truncate_plus") return Reaction::truncate_plus(parse(body, here));
        if (key == "truncate_minus") return Reaction::truncate_minus(parse(body, here));
    } catch (const std::invalid_argument& e) {
        const std::string msg = e.what();
        if (msg.rfind(where, 0) == 0) throw;
        throw std::invalid_argument(here + ": " + msg);
    }
    throw std::invalid_argument(where + ": unknown reaction kind '" + key + "'");
}

}  // namespace

Reaction reaction_from_json(const nlohmann::json& j) { return parse(j, "reaction"); }

std::string describe(const Reaction& r) { return to_json(r).dump(); }

}  // namespace fracp
