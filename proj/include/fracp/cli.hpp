#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "fracp/reaction.hpp"

namespace fracp::cli {

/// Thrown for malformed or inconsistent configuration; the message names the field.
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct EigenBlock {
    double tol = 1e-10;
    std::size_t max_iter = 0;  // 0: solver default
    std::size_t path_points = 17;
    bool second = true;
};

struct SolveBlock {
    std::string method = "mp";  // min, plus, minus, mp, three
    double tol = 1e-8;
    std::size_t max_iter = 0;
    std::size_t path_points = 17;
    /// Start for method "min": start_scale * phi_1.
    double start_scale = 1.0;
};

struct AnalysisBlock {
    std::optional<double> r;      // default: largest reaction exponent, at least p
    std::size_t max_n = 60;
    std::optional<double> gamma;  // default: s
    std::optional<std::filesystem::path> solution;  // CSV; otherwise solve first
    std::vector<Reaction> batch;  // extra reactions for the L-infinity fit
    std::pair<double, double> t_range{1e-6, 1e6};
};

struct PropsBlock {
    std::size_t samples = 20;
};

struct RunConfig {
    double a = -1.0;
    double b = 1.0;
    std::size_t n = 0;
    double s = 0.0;
    double p = 0.0;
    Reaction reaction = Reaction::zero();
    std::uint64_t seed = 12345;
    EigenBlock eigen;
    SolveBlock solve;
    AnalysisBlock analysis;
    PropsBlock props;
};

/// Strict parse: unknown or mistyped fields throw ConfigError. Relative
/// solution paths are resolved against `base`.
RunConfig parse_config(const nlohmann::json& j, const std::filesystem::path& base = {});
RunConfig load_config(const std::filesystem::path& path);

struct Overrides {
    std::optional<double> tol;
    std::optional<std::size_t> max_iter;
    std::optional<std::string> method;
    std::optional<std::uint64_t> seed;
    unsigned threads = 1;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitFlagged = 2;

/// Runs one command and writes report.json (plus CSV files) into `out`.
/// Returns the exit status; config problems are reported on stderr as status 1.
int run(const std::string& command, const std::filesystem::path& config, const std::filesystem::path& out,
        const Overrides& overrides);

/// Report for a command already configured; exposed for tests.
struct Outcome {
    nlohmann::json report;
    int status = kExitOk;
};
Outcome execute(const std::string& command, const RunConfig& cfg, const std::filesystem::path& out,
                unsigned threads = 1);

}  // namespace fracp::cli
