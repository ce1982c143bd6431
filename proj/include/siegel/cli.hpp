#pragma once

#include <iosfwd>

namespace siegel {

// Full command-line entry point, parameterized over streams so tests can run
// commands in-process.  Returns the process exit code: 0 success/equal,
// 1 verified difference, 2 usage or input error, 3 resource-cap refusal.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace siegel
