#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "pushopt/io.hpp"

namespace pushopt {

/// Commands: "evolve", "run", "hybrid", "usage", "simplify", "reevaluate".
///
/// A request names its inputs by value or by path. The command resolves every
/// path into inline content, writes that resolved request into a manifest next
/// to its outputs, then produces the outputs. Running a resolved request again
/// reproduces the outputs byte for byte.
///
/// Returns the manifest. Throws ConfigError for bad requests and
/// std::runtime_error or filesystem_error when inputs or outputs fail.
Json execute_command(const std::string& command, const Json& request);

/// Re-runs the request recorded in a manifest. With `out_dir` set, output files
/// keep their names but are written under that directory.
Json replay_command(const std::filesystem::path& manifest,
                    const std::optional<std::filesystem::path>& out_dir = std::nullopt);

}  // namespace pushopt
