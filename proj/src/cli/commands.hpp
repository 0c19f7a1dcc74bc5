#pragma once

#include <iosfwd>

namespace chanscale::cli {

// Full CLI entry point. argv follows main() conventions (argv[0] is the program
// name). Returns the process exit code: 0 success, 1 usage/config errors, 2
// infeasible scaling. Streams are injected so tests can capture output.
int runMain(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace chanscale::cli
