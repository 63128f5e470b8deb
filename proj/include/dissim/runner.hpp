// Experiment runner behind the CLI: materializes engine configs from a
// RunConfig, trains, and writes deterministic trace/summary files plus a
// manifest. Wall-clock timings go to a separate file so the CSV outputs stay
// byte-identical across repeated runs.
#pragma once

#include <filesystem>

#include "dissim/config.hpp"

namespace dissim {

// Parent directory override for outputs (applies when set and non-empty).
inline constexpr const char* kOutputRootEnv = "DISSIM_OUTPUT_ROOT";

std::filesystem::path resolve_output_dir(const RunConfig& cfg);

// Fixed-header CSV for one training trace.
//   iteration,loss,energy_or_fidelity,gap_to_E0_or_infidelity,grad_norm
std::string trace_to_csv(const TrainingTrace& trace, bool energy_task, double reference);

// Executes the configured task. Returns 0 on full success; any failed or
// aborted sub-run yields 1, with partial outputs retained and the failure
// recorded in manifest.json.
int run(const RunConfig& cfg);

}  // namespace dissim
