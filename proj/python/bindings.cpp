#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "fracp/analysis.hpp"
#include "fracp/cli.hpp"
#include "fracp/eigen.hpp"
#include "fracp/solve.hpp"

namespace py = pybind11;
using namespace fracp;

namespace {

py::array_t<double> to_array(const GridFunction& u) {
    const auto v = u.values();
    return py::array_t<double>(static_cast<py::ssize_t>(v.size()), v.data());
}

GridFunction from_values(const Mesh& mesh, const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
    if (a.ndim() != 1) throw std::invalid_argument("values must be one-dimensional");
    return GridFunction(mesh, std::vector<double>(a.data(), a.data() + a.size()));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Fractional p-Laplacian on an interval: kernels, eigenpairs, critical points and audits";

    py::class_<Mesh>(m, "Mesh")
        .def(py::init<double, double, std::size_t>(), py::arg("a"), py::arg("b"), py::arg("n"))
        .def_property_readonly("a", &Mesh::a)
        .def_property_readonly("b", &Mesh::b)
        .def_property_readonly("n", &Mesh::n)
        .def_property_readonly("h", &Mesh::h)
        .def("centers", &Mesh::centers)
        .def("dilated", &Mesh::dilated)
        .def("__repr__", [](const Mesh& mesh) {
            return "Mesh(" + std::to_string(mesh.a()) + ", " + std::to_string(mesh.b()) + ", " +
                   std::to_string(mesh.n()) + ")";
        });
    m.def("build_mesh", &build_mesh, py::arg("a"), py::arg("b"), py::arg("n"));

    py::class_<GridFunction>(m, "GridFunction")
        .def(py::init<Mesh>())
        .def(py::init(&from_values), py::arg("mesh"), py::arg("values"))
        .def_property_readonly("mesh", &GridFunction::mesh)
        .def_property_readonly("values", &to_array)
        .def("__len__", &GridFunction::size)
        .def("is_zero", &GridFunction::is_zero)
        .def("__neg__", [](const GridFunction& u) { return -u; })
        .def("__add__", [](const GridFunction& u, const GridFunction& v) { return u + v; })
        .def("__sub__", [](const GridFunction& u, const GridFunction& v) { return u - v; })
        .def("__mul__", [](const GridFunction& u, double c) { return c * u; })
        .def("__rmul__", [](const GridFunction& u, double c) { return c * u; });
    m.def("lp_norm", &lp_norm, py::arg("u"), py::arg("nu"));
    m.def("linf_norm", &linf_norm, py::arg("u"));
    m.def("write_csv", py::overload_cast<const std::string&, const GridFunction&>(&write_csv), py::arg("path"),
          py::arg("u"));
    m.def("read_csv", &read_csv, py::arg("path"));

    py::class_<FracParams>(m, "FracParams")
        .def(py::init<double, double>(), py::arg("s"), py::arg("p"))
        .def_property_readonly("s", &FracParams::s)
        .def_property_readonly("p", &FracParams::p)
        .def_property_readonly("sp", &FracParams::sp)
        .def_property_readonly("critical_exponent", &FracParams::critical_exponent);

    py::class_<NonlocalKernel, std::shared_ptr<NonlocalKernel>>(m, "NonlocalKernel")
        .def_property_readonly("mesh", &NonlocalKernel::mesh)
        .def_property_readonly("params", &NonlocalKernel::params)
        .def_property_readonly("pair_weights", &NonlocalKernel::pair_weights)
        .def_property_readonly("exterior_weights", &NonlocalKernel::exterior_weights);
    m.def(
        "assemble_kernel",
        [](const Mesh& mesh, const FracParams& params, unsigned threads) {
            return std::make_shared<NonlocalKernel>(assemble_kernel(mesh, params, threads));
        },
        py::arg("mesh"), py::arg("params"), py::arg("threads") = 1);
    m.def("seminorm_p", &seminorm_p, py::arg("kernel"), py::arg("u"));
    m.def("apply_A", &apply_A, py::arg("kernel"), py::arg("u"));
    m.def("pairing", &pairing, py::arg("kernel"), py::arg("u"), py::arg("v"));

    py::class_<Reaction>(m, "Reaction")
        .def_static("power", &Reaction::power, py::arg("c"), py::arg("r"))
        .def_static("eigen", &Reaction::eigen, py::arg("lam"), py::arg("p"))
        .def_static("sum", &Reaction::sum, py::arg("terms"))
        .def_static("truncate_plus", &Reaction::truncate_plus)
        .def_static("truncate_minus", &Reaction::truncate_minus)
        .def_static("zero", &Reaction::zero)
        .def_static("from_json", [](const std::string& text) { return reaction_from_json(nlohmann::json::parse(text)); })
        .def("f", &Reaction::f)
        .def("F", &Reaction::F)
        .def("is_odd", &Reaction::is_odd)
        .def("to_json", [](const Reaction& r) { return to_json(r).dump(); })
        .def("__repr__", &describe);

    py::enum_<Variant>(m, "Variant")
        .value("full", Variant::full)
        .value("plus", Variant::plus)
        .value("minus", Variant::minus);

    py::class_<Problem>(m, "Problem")
        .def(py::init([](std::shared_ptr<NonlocalKernel> k, Reaction r, Variant v) {
                 return Problem(std::move(k), std::move(r), v);
             }),
             py::arg("kernel"), py::arg("reaction"), py::arg("variant") = Variant::full)
        .def_property_readonly("mesh", &Problem::mesh)
        .def_property_readonly("params", &Problem::params)
        .def("with_variant", &Problem::with_variant);
    m.def("phi", &phi, py::arg("prob"), py::arg("u"));
    m.def("grad_phi", &grad_phi, py::arg("prob"), py::arg("u"));
    m.def("residual_norm", &residual_norm, py::arg("prob"), py::arg("u"));

    py::class_<EigenResult>(m, "EigenResult")
        .def_readonly("lam", &EigenResult::lambda)
        .def_readonly("eigenfunction", &EigenResult::eigenfunction)
        .def_readonly("iterations", &EigenResult::iterations)
        .def_readonly("residual", &EigenResult::residual)
        .def_readonly("converged", &EigenResult::converged)
        .def_readonly("history", &EigenResult::history);
    m.def("rayleigh_quotient", &rayleigh_quotient, py::arg("kernel"), py::arg("u"));
    m.def("lambda1", &lambda1, py::arg("kernel"), py::arg("tol") = 1e-10, py::arg("max_iter") = 0);
    m.def(
        "lambda2_approx",
        [](const NonlocalKernel& k, double tol, std::size_t max_iter, std::size_t points) {
            return lambda2_approx(k, tol, max_iter, points);
        },
        py::arg("kernel"), py::arg("tol") = 1e-10, py::arg("max_iter") = 0, py::arg("path_points") = 17);

    py::class_<SolveFlags>(m, "SolveFlags")
        .def_readonly("converged", &SolveFlags::converged)
        .def_readonly("nonzero", &SolveFlags::nonzero)
        .def_readonly("sign_plus", &SolveFlags::sign_plus)
        .def_readonly("sign_minus", &SolveFlags::sign_minus)
        .def_readonly("sign_changing", &SolveFlags::sign_changing)
        .def("names", &SolveFlags::names);
    py::class_<GeometryAudit>(m, "GeometryAudit")
        .def_readonly("passed", &GeometryAudit::passed)
        .def_readonly("ring_radius", &GeometryAudit::ring_radius)
        .def_readonly("ring_level", &GeometryAudit::ring_level)
        .def_readonly("e_energy", &GeometryAudit::e_energy)
        .def_readonly("diagnostic", &GeometryAudit::diagnostic);
    py::class_<SolveReport>(m, "SolveReport")
        .def_readonly("solution", &SolveReport::solution)
        .def_readonly("energy", &SolveReport::energy)
        .def_readonly("residual", &SolveReport::residual)
        .def_readonly("iterations", &SolveReport::iterations)
        .def_property_readonly("method", [](const SolveReport& r) { return std::string(to_string(r.method)); })
        .def_readonly("flags", &SolveReport::flags)
        .def_readonly("diagnostics", &SolveReport::diagnostics)
        .def_readonly("geometry", &SolveReport::geometry);
    py::enum_<Sign>(m, "Sign").value("plus", Sign::plus).value("minus", Sign::minus);
    m.def("solve_global_min", &solve_global_min, py::arg("prob"), py::arg("tol"), py::arg("max_iter"),
          py::arg("start"));
    m.def("solve_constant_sign", &solve_constant_sign, py::arg("prob"), py::arg("sign"), py::arg("tol"),
          py::arg("max_iter") = 0);
    m.def("solve_mountain_pass", &solve_mountain_pass, py::arg("prob"), py::arg("tol"), py::arg("max_iter") = 0,
          py::arg("path_points") = 17, py::arg("seed") = 12345);
    m.def("refine_solution", &refine_solution, py::arg("prob"), py::arg("u0"), py::arg("tol"),
          py::arg("max_iter") = 0);

    py::class_<DeGiorgiTrace>(m, "DeGiorgiTrace")
        .def_readonly("levels", &DeGiorgiTrace::levels)
        .def_readonly("rho", &DeGiorgiTrace::rho)
        .def_readonly("monotone", &DeGiorgiTrace::monotone)
        .def_readonly("converged", &DeGiorgiTrace::converged)
        .def_readonly("n_star", &DeGiorgiTrace::n_star);
    py::class_<DeGiorgiReport>(m, "DeGiorgiReport")
        .def_readonly("positive", &DeGiorgiReport::positive)
        .def_readonly("negative", &DeGiorgiReport::negative)
        .def("converged", &DeGiorgiReport::converged)
        .def("monotone", &DeGiorgiReport::monotone);
    m.def("degiorgi_iterate", &degiorgi_iterate, py::arg("u"), py::arg("r"), py::arg("max_n") = 60);

    py::class_<PohozaevReport>(m, "PohozaevReport")
        .def_readonly("interior_deficit", &PohozaevReport::interior_deficit)
        .def_readonly("scaling_derivative", &PohozaevReport::scaling_derivative)
        .def_readonly("scaling_derivative_fd", &PohozaevReport::scaling_derivative_fd)
        .def_readonly("fd_relative_error", &PohozaevReport::fd_relative_error)
        .def_readonly("boundary_profile", &PohozaevReport::boundary_profile)
        .def_property_readonly("verdict", [](const PohozaevReport& r) { return std::string(to_string(r.verdict)); });
    m.def("pohozaev_deficit", &pohozaev_deficit, py::arg("prob"), py::arg("u"), py::arg("gamma"));
    m.def(
        "nonexistence_check",
        [](const Reaction& r, const FracParams& params, std::pair<double, double> range, std::size_t samples) {
            return std::string(to_string(nonexistence_check(r, params, range, samples).verdict));
        },
        py::arg("reaction"), py::arg("params"), py::arg("t_range"), py::arg("samples") = 1001);

    m.def(
        "run_cli",
        [](const std::string& command, const std::filesystem::path& config, const std::filesystem::path& out,
           unsigned threads) {
            cli::Overrides ov;
            ov.threads = threads;
            return cli::run(command, config, out, ov);
        },
        py::arg("command"), py::arg("config"), py::arg("out"), py::arg("threads") = 1);
}
