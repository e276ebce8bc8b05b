// fracp: solve and audit the fractional p-Laplacian Dirichlet problem on an interval.

#include <CLI11.hpp>

#include "fracp/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Fractional p-Laplacian solver and diagnostics on an interval"};
    app.require_subcommand(1);

    std::string config;
    std::string out = ".";
    fracp::cli::Overrides ov;
    std::optional<double> tol;
    std::optional<std::size_t> max_iter;
    std::optional<std::string> method;
    std::optional<std::uint64_t> seed;

    const std::pair<const char*, const char*> commands[] = {
        {"eigen", "first and second eigenpairs"},
        {"solve", "critical points of the energy"},
        {"verify-linfty", "De Giorgi levels and the L-infinity fit"},
        {"pohozaev", "Pohozaev deficit and nonexistence criterion"},
        {"props", "operator and energy self-test"},
    };
    for (const auto& [name, help] : commands) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->add_option("--config", config, "JSON problem description")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", out, "output directory");
        sub->add_option("--tol", tol, "solver tolerance");
        sub->add_option("--max-iter", max_iter, "iteration cap (0: 50 n)");
        sub->add_option("--method", method, "min, plus, minus, mp or three")
            ->check(CLI::IsMember({"min", "plus", "minus", "mp", "three"}));
        sub->add_option("--seed", seed, "probe seed");
        sub->add_option("--threads", ov.threads, "threads for kernel assembly")->check(CLI::PositiveNumber);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : fracp::cli::kExitConfig;
    }
    ov.tol = tol;
    ov.max_iter = max_iter;
    ov.method = method;
    ov.seed = seed;
    return fracp::cli::run(app.get_subcommands().front()->get_name(), config, out, ov);
}
