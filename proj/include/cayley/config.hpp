#pragma once

// JSON run configuration for the command-line front end.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

#include <json.hpp>

#include "cayley/grid.hpp"
#include "cayley/kernel.hpp"
#include "cayley/solver.hpp"

namespace cayley {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ProbeConfig {
    int n_starts = 20;
    std::uint64_t seed = 0;
};

struct SampleConfig {
    int depth = 2;
    std::size_t n_samples = 1000;
    std::uint64_t seed = 0;
    int bins = 20;
};

struct CompareConfig {
    int depth = 1;
    std::size_t n_mc = 100000;
    int bins = 20;
    std::uint64_t seed = 0;
    double z_threshold = 4.0;
    /// Replaces (k+1)/k in the analytic marginal; negative controls only.
    std::optional<double> exponent_override;
};

struct EigenConfig {
    std::optional<double> target_lambda;
};

struct RunConfig {
    explicit RunConfig(KernelSpec spec) : kernel(std::move(spec)) {}

    KernelSpec kernel;
    int k = 2;
    QuadratureRule grid;
    SolveOptions solver;
    int bounds_resolution = kDefaultBoundsResolution;
    ProbeConfig probe;
    SampleConfig sample;
    CompareConfig compare;
    EigenConfig eigen;
    /// Path of a CSV initial guess, resolved against the config file.
    std::optional<std::filesystem::path> init_csv;
};

/// Kernel record: {"type": "constant" | "polynomial_k1" | "exponential_xi" |
/// "tabulated", ...}. Polynomial terms are [i, j, c] triples.
KernelSpec parse_kernel(const nlohmann::json& j);

/// Throws ConfigError on any missing or malformed field.
RunConfig parse_config(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
RunConfig load_config(const std::filesystem::path& path);

/// Overrides every task seed (probe, sample, compare).
void override_seeds(RunConfig& cfg, std::uint64_t seed);

}  // namespace cayley
