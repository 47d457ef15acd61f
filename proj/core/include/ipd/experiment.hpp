#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ipd/config.hpp"

namespace ipd {

/// Version string written into every run manifest; bump when an output
/// schema changes.
inline constexpr const char* kArtifactVersion = "0.1.0";

/// Command-line overrides. Flags beat config values; any override applied
/// is recorded in the manifest.
struct RunOptions {
  std::optional<std::string> out_override;
};

struct RunSummary {
  std::string out_dir;
  std::vector<std::string> files;  // written outputs, relative to out_dir
};

/// Worker count actually used: the IPD_WORKERS environment variable (when
/// set) beats `config_workers`; values <= 0 select hardware concurrency.
/// Throws ConfigError if the variable is set but not an integer.
int resolve_worker_count(int config_workers);

/// Runs the configured experiment and writes its outputs under the resolved
/// output directory (created if missing). matrices/series/summary files are
/// byte-reproducible for a fixed config; manifest.json is written last and
/// carries the config snapshot, seed, version, per-file checksums, and
/// wall-clock duration.
RunSummary run_experiment(const ExperimentConfig& cfg, const RunOptions& opts = {});

}  // namespace ipd
