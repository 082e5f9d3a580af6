#pragma once

#include "bstark/pipeline.hpp"

#include <iosfwd>
#include <string>

namespace bstark {

/// Batch run configuration; conductor is "n" (rational generator) or "a,b" for a + b omega.
struct RunConfig {
  long d = 5;
  std::string conductor = "3";
  long p = 7;
  long ell = 11;
  int precision = 3;
  int workers = 1;
  std::string cache_dir;
  std::string out;
};

enum ExitCode { kExitOk = 0, kExitConfig = 2, kExitPrecision = 3, kExitInvariant = 4 };

/// Applies one key=value pair; ConfigError for unknown keys or malformed values.
void apply_config_key(RunConfig& rc, const std::string& key, const std::string& value);
/// Reads a flat key=value file ('#' starts a comment).
RunConfig read_config_file(const std::string& path, RunConfig base = {});

IdealF parse_conductor(const QuadField& F, const std::string& text);
/// The validated ZetaConfig; ConfigError naming every failed check.
ZetaConfig validated_config(const RunConfig& rc);

/// Each command writes a deterministic report to `report` and timings to `log`,
/// returning the exit code. Library exceptions are translated by run_command.
int cmd_theta(const RunConfig& rc, std::ostream& report, std::ostream& log);
int cmd_unit(const RunConfig& rc, std::ostream& report, std::ostream& log);
int cmd_sku(const RunConfig& rc, std::ostream& report, std::ostream& log);

/// Dispatch by name with the exit-code mapping 0/2/3/4; writes to rc.out when set.
int run_command(const std::string& name, const RunConfig& rc, std::ostream& report, std::ostream& log);

}  // namespace bstark
