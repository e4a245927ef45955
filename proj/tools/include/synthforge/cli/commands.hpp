// Copyright 2026 The synthforge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "synthforge/cli/config.hpp"

namespace synthforge::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitConfig = 2,  // usage or configuration error
  kExitData = 3,    // missing or malformed input data
};

struct GenResult {
  std::int64_t written = 0;
  std::int64_t skipped = 0;  // already complete
};

/// Generates `extension` samples into out_dir/<index>/ plus plan.json and
/// manifest.json. Complete samples are left untouched.
GenResult generate(const std::string& extension, const RunConfig& cfg, const std::filesystem::path& out_dir,
                   int workers);

/// Class statistics, donor yields and the allocation for daclonsynth.
nlohmann::json plan_daclonsynth(const RunConfig& cfg);

/// Runs the command line; returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace synthforge::cli
