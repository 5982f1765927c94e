#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace svlift {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int { kExitOk = 0, kExitConfig = 2, kExitRuntime = 3, kExitAssert = 4 };

struct RunRequest {
  std::string subcommand;
  std::string config_path;
  std::string out_dir = "out";
  std::optional<std::uint64_t> seed;
  unsigned threads = 1;
  bool assert_mode = false;
};

std::vector<std::string> subcommands();

/// Runs one subcommand end to end: parses the config, writes CSVs, the manifest and a config copy into
/// out_dir, and returns the process exit code. Diagnostics go to `log`.
int run_experiment(const RunRequest& req, std::ostream& log);

}  // namespace svlift
