#pragma once

#include <string>
#include <vector>

namespace lagns {

/// Process exit codes of the command-line tool.
enum ExitCode : int {
  exit_ok = 0,
  exit_usage = 1,           // bad flags or unreadable/unwritable files
  exit_config_parse = 2,    // malformed config text or unknown key
  exit_config_rejected = 3, // well-formed config with inadmissible values
  exit_solver_abort = 4,    // positivity floors could not be kept
  exit_invariant = 5,       // an invariant of the ledger failed
  exit_order_window = 6,    // verify: observed order outside its window
};

struct Command {
  std::string verb;  // run | verify | sweep | report
  std::string config_path;
  std::string out_dir;
  std::vector<std::string> overrides;
  unsigned jobs = 1;
};

int execute(const Command& command);

/// Parses argv with CLI11 and dispatches to execute().
int cli_main(int argc, char** argv);

}  // namespace lagns
