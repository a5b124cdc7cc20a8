#pragma once

#include <string>

#include "ottoforge/config.hpp"

namespace ottoforge {

/// Serialize one double at full 17-digit fidelity.
std::string fmt17(double v);

/// Execute the configured task and write result.json, run_meta.json and the
/// task's CSV tables into out_dir (atomically: temp file + rename).
/// Returns the process exit code: 0 success, 2 validation failure,
/// 3 optimization failure.
int run_task(const Json& raw_config, const std::string& out_dir);

}  // namespace ottoforge
