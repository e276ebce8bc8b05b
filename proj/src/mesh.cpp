#include "fracp/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace fracp {

Mesh::Mesh(double a, double b, std::size_t n) : a_(a), b_(b), n_(n), h_(0.0) {
    if (!std::isfinite(a) || !std::isfinite(b))
        throw std::invalid_argument("mesh: endpoints must be finite");
    if (!(a < b))
        throw std::invalid_argument("mesh: require a < b");
    if (n < 2)
        throw std::invalid_argument("mesh: require n >= 2");
    h_ = (b - a) / static_cast<double>(n);
}

std::vector<double> Mesh::centers() const {
    std::vector<double> x(n_);
    for (std::size_t i = 0; i < n_; ++i) x[i] = center(i);
    return x;
}

Mesh Mesh::dilated(double factor) const {
    if (!(factor > 0.0) || !std::isfinite(factor))
        throw std::invalid_argument("mesh: dilation factor must be positive");
    return Mesh(a_ * factor, b_ * factor, n_);
}

Mesh build_mesh(double a, double b, std::size_t n) { return Mesh(a, b, n); }

GridFunction::GridFunction(Mesh mesh) : mesh_(mesh), values_(mesh.n(), 0.0) {}

GridFunction::GridFunction(Mesh mesh, std::vector<double> values)
    : mesh_(mesh), values_(std::move(values)) {
    if (values_.size() != mesh_.n())
        throw std::invalid_argument("grid function: value count does not match mesh");
    if (!std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); }))
        throw std::invalid_argument("grid function: values must be finite");
}

GridFunction& GridFunction::operator*=(double c) noexcept {
    for (double& v : values_) v *= c;
    return *this;
}

GridFunction& GridFunction::operator+=(const GridFunction& other) {
    require_same_mesh(mesh_, other, "grid function +=");
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
    return *this;
}

GridFunction& GridFunction::operator-=(const GridFunction& other) {
    require_same_mesh(mesh_, other, "grid function -=");
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
    return *this;
}

bool GridFunction::is_zero() const noexcept {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return v == 0.0; });
}

GridFunction operator*(double c, GridFunction u) { return u *= c; }
GridFunction operator+(GridFunction u, const GridFunction& v) { return u += v; }
GridFunction operator-(GridFunction u, const GridFunction& v) { return u -= v; }
GridFunction operator-(GridFunction u) { return u *= -1.0; }

double lp_norm(const GridFunction& u, double nu) {
    if (!(nu >= 1.0)) throw std::invalid_argument("lp_norm: require nu >= 1");
    const double scale = linf_norm(u);
    if (scale == 0.0) return 0.0;
    // Scaled accumulation keeps large nu from overflowing.
    double sum = 0.0;
    for (double v : u.values()) sum += std::pow(std::abs(v) / scale, nu);
    return scale * std::pow(u.mesh().h() * sum, 1.0 / nu);
}

double linf_norm(const GridFunction& u) noexcept {
    double m = 0.0;
    for (double v : u.values()) m = std::max(m, std::abs(v));
    return m;
}

void require_same_mesh(const Mesh& mesh, const GridFunction& u, const char* what) {
    if (!(u.mesh() == mesh))
        throw std::invalid_argument(std::string(what) + ": grid function lives on a different mesh");
}

void write_csv(std::ostream& os, const GridFunction& u) {
    os << "x,u\n";
    char buf[80];
    for (std::size_t i = 0; i < u.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", u.mesh().center(i), u[i]);
        os << buf;
    }
}

void write_csv(const std::string& path, const GridFunction& u) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
    write_csv(os, u);
}

GridFunction read_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open '" + path + "'");
    std::string line;
    if (!std::getline(is, line) || line.rfind("x,u", 0) != 0)
        throw std::runtime_error(path + ": expected header 'x,u'");
    std::vector<double> x, v;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw std::runtime_error(path + ": malformed row '" + line + "'");
        x.push_back(std::stod(line.substr(0, comma)));
        v.push_back(std::stod(line.substr(comma + 1)));
    }
    if (x.size() < 2) throw std::runtime_error(path + ": need at least two rows");
    const double h = (x.back() - x.front()) / static_cast<double>(x.size() - 1);
    const Mesh mesh(x.front() - 0.5 * h, x.back() + 0.5 * h, x.size());
    return GridFunction(mesh, std::move(v));
}

}  // namespace fracp
