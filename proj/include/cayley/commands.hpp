#pragma once

// Subcommands of the batch front end. Each returns a process exit code and
// writes report.json (plus task-specific files) into the output directory,
// echoing the report on `out`.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "cayley/config.hpp"

namespace cayley {

enum ExitCode : int {
    kExitOk = 0,
    kExitInternal = 1,
    kExitConfig = 2,
    kExitCertificateFail = 3,
    kExitNonConvergence = 4,
    kExitProbeMismatch = 5,
    kExitMarginalMismatch = 6,
};

struct CommandContext {
    std::filesystem::path out_dir = "out";
    std::ostream* out = nullptr;
    std::ostream* err = nullptr;
};

int cmd_certify(const RunConfig& cfg, const CommandContext& ctx);
int cmd_solve(const RunConfig& cfg, const CommandContext& ctx);
int cmd_eigen(const RunConfig& cfg, const CommandContext& ctx);
int cmd_probe(const RunConfig& cfg, const CommandContext& ctx);
int cmd_sample(const RunConfig& cfg, const CommandContext& ctx);
int cmd_compare(const RunConfig& cfg, const CommandContext& ctx);

/// Loads the config, applies the seed override and dispatches. Config and
/// argument errors map to kExitConfig with a diagnostic on ctx.err.
int run_command(const std::string& name, const std::filesystem::path& config_path, const CommandContext& ctx,
                std::optional<std::uint64_t> seed_override = std::nullopt);

}  // namespace cayley
