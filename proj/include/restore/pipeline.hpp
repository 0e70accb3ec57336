#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace restore {

/// Malformed configuration, as opposed to a runtime stage failure. The CLI
/// maps ConfigError to exit 2 and everything else to exit 3. The message
/// lists every invalid line, one per line.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// One pipeline stage: a validated name plus its parameters, kept as the
/// verbatim config strings so serialization round-trips exactly.
struct StageConfig {
    std::string name;
    std::map<std::string, std::string> params;
    bool operator==(const StageConfig&) const = default;
};

struct PipelineConfig {
    std::string input;
    std::string outdir;
    std::uint64_t seed = 1;
    bool quiet = false;
    std::vector<std::string> metrics;  // subset of isnr,bsnr,mse,psnr,enl
    std::vector<StageConfig> stages;
    bool operator==(const PipelineConfig&) const = default;
};

/// Parses "key = value" lines with '#' comments; stages arrive as
/// "stage.N.name" / "stage.N.param" groups with contiguous indices from 0.
/// Collects every invalid line before throwing ConfigError. The environment
/// variable RESTORE_SEED, when set, overrides the config seed.
PipelineConfig parse_config(const std::string& path);
PipelineConfig parse_config_text(const std::string& text);

std::string serialize_config(const PipelineConfig& cfg);

/// Keys assigned by the config text, syntax errors ignored. Lets the CLI
/// detect flag/config conflicts (the config file wins, with a warning).
std::set<std::string> config_keys(const std::string& text);

/// Typed parameter access for validated stages.
double stage_double(const StageConfig& s, const std::string& key, double fallback);
long stage_long(const StageConfig& s, const std::string& key, long fallback);
std::string stage_string(const StageConfig& s, const std::string& key,
                         const std::string& fallback);
bool stage_bool(const StageConfig& s, const std::string& key, bool fallback);

/// Runs the stages in order. Every stage writes <outdir>/<index>_<name>.pgm
/// and refreshes <outdir>/metrics.csv, so earlier artifacts survive a later
/// failure. Returns 0 on success, 3 on a stage failure (message on stderr,
/// prefixed with the stage index and name).
int run_pipeline(const PipelineConfig& cfg);

}  // namespace restore
