#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace eisenlab {

inline constexpr const char* kVersion = "0.1.0";

const std::vector<std::string>& subcommands();

struct CliRequest {
  std::string subcommand;
  std::string config_path;
  std::string out_dir;  // empty: output.dir from the config
  int threads = -1;     // negative: threads from the config
};

// Runs one subcommand, writing <out>/<subcommand>.csv and <out>/manifest.json.
// On failure writes <out>/error.json (when the directory is usable) and the same JSON
// record to err. Returns the process exit code: 0 ok, 2 config, 3 group/domain, 4 numeric.
int run_subcommand(const CliRequest& req, std::ostream& out, std::ostream& err);

}  // namespace eisenlab
