#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace fracp {

/// Uniform cell-centered grid on the interval (a, b).
///
/// Cell i covers [a + i h, a + (i+1) h] and is represented by its center
/// x_i = a + (i + 1/2) h. Functions on the mesh are piecewise constant and
/// vanish identically outside (a, b).
class Mesh {
public:
    Mesh(double a, double b, std::size_t n);

    double a() const noexcept { return a_; }
    double b() const noexcept { return b_; }
    std::size_t n() const noexcept { return n_; }
    double h() const noexcept { return h_; }
    double length() const noexcept { return b_ - a_; }

    double center(std::size_t i) const noexcept { return a_ + (static_cast<double>(i) + 0.5) * h_; }
    std::vector<double> centers() const;

    /// Same n, endpoints multiplied by factor > 0.
    Mesh dilated(double factor) const;

    friend bool operator==(const Mesh&, const Mesh&) = default;

private:
    double a_;
    double b_;
    std::size_t n_;
    double h_;
};

Mesh build_mesh(double a, double b, std::size_t n);

/// Nodal values of a function in X(Omega) on a given mesh.
class GridFunction {
public:
    explicit GridFunction(Mesh mesh);                       // zero function
    GridFunction(Mesh mesh, std::vector<double> values);

    const Mesh& mesh() const noexcept { return mesh_; }
    std::size_t size() const noexcept { return values_.size(); }

    std::span<const double> values() const noexcept { return values_; }
    std::span<double> values() noexcept { return values_; }

    double operator[](std::size_t i) const noexcept { return values_[i]; }
    double& operator[](std::size_t i) noexcept { return values_[i]; }

    GridFunction& operator*=(double c) noexcept;
    GridFunction& operator+=(const GridFunction& other);
    GridFunction& operator-=(const GridFunction& other);

    bool is_zero() const noexcept;

private:
    Mesh mesh_;
    std::vector<double> values_;
};

GridFunction operator*(double c, GridFunction u);
GridFunction operator+(GridFunction u, const GridFunction& v);
GridFunction operator-(GridFunction u, const GridFunction& v);
GridFunction operator-(GridFunction u);

/// Sample a callable at the cell centers.
template <class Fn>
GridFunction sample(const Mesh& mesh, Fn&& fn) {
    std::vector<double> v(mesh.n());
    for (std::size_t i = 0; i < mesh.n(); ++i) v[i] = fn(mesh.center(i));
    return GridFunction(mesh, std::move(v));
}

/// Mass-lumped (h sum |u_i|^nu)^(1/nu); nu >= 1.
double lp_norm(const GridFunction& u, double nu);
double linf_norm(const GridFunction& u) noexcept;

/// Throws std::invalid_argument when u does not live on `mesh`.
void require_same_mesh(const Mesh& mesh, const GridFunction& u, const char* what);

// CSV with header `x,u`, 17 significant digits, LF line endings.
void write_csv(std::ostream& os, const GridFunction& u);
void write_csv(const std::string& path, const GridFunction& u);
/// Reads a `x,u` CSV and reconstructs the uniform mesh from the centers.
GridFunction read_csv(const std::string& path);

}  // namespace fracp
