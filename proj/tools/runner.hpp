#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace clark::tools {

/// Bad command line or config file; maps to exit status 1.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct KeySpec {
    std::string name;
    std::string default_value;
    std::string help;
};

/// Names of the experiments, in CLI order.
const std::vector<std::string>& experiment_names();

/// Documented parameter keys of one experiment.  Throws UsageError for an
/// unknown experiment.
const std::vector<KeySpec>& experiment_keys(const std::string& experiment);

struct ExperimentConfig {
    std::string experiment;
    std::map<std::string, std::string> params;  // fully resolved, defaults included
    std::filesystem::path output_dir = "out";
    std::uint64_t rng_seed = 1;
    std::size_t threads = 1;
};

/// Parses flat `key = value` lines ('#' starts a comment).  Besides the
/// experiment keys, `out`, `seed` and `threads` are accepted.
std::map<std::string, std::string> read_config_file(const std::filesystem::path& path);

/// Defaults, then `file` entries, then `flags`; unknown keys are rejected.
ExperimentConfig resolve_config(const std::string& experiment,
                                const std::map<std::string, std::string>& file,
                                const std::map<std::string, std::string>& flags);

enum ExitStatus : int { kSuccess = 0, kUsage = 1, kVerificationFailed = 2 };

/// Runs the experiment, writes results.json, CSV files and manifest.json into
/// config.output_dir, and returns the exit status.  Diagnostics go to `err`.
int run(const ExperimentConfig& config, std::ostream& err);

}  // namespace clark::tools
