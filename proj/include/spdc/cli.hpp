#pragma once

#include <iosfwd>

namespace spdc {

/// Exit codes of the command-line front-end.
enum ExitCode : int {
  kExitOk = 0,
  kExitUnexpected = 1,
  kExitConfig = 2,
  kExitNumeric = 3,
  kExitFormat = 4,
};

/// Runs `spdc-corr` with the given arguments; results without `--out` and
/// summaries go to out, diagnostics to err. Never throws.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace spdc
