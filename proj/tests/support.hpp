#pragma once

#include <cstdint>
#include <random>

#include "fracp/mesh.hpp"

namespace testing_support {

inline fracp::GridFunction random_function(const fracp::Mesh& mesh, std::mt19937_64& rng, double lo = -1.0,
                                           double hi = 1.0) {
    std::uniform_real_distribution<double> dist(lo, hi);
    fracp::GridFunction u(mesh);
    for (std::size_t i = 0; i < u.size(); ++i) u[i] = dist(rng);
    return u;
}

inline double rel_err(double got, double want) {
    const double scale = std::abs(want);
    return scale > 0.0 ? std::abs(got - want) / scale : std::abs(got);
}

}  // namespace testing_support
