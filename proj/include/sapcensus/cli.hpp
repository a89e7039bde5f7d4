#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sapcensus {

// Command-line front end.  Subcommands: census, rect, verify, bench.
// Data goes to out, diagnostics to err.  Exit codes: 0 success/PASS,
// 1 FAIL or unexpected error, 2 usage error, 3 resource limit exceeded.
int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err);

// Convenience overload for tests; args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace sapcensus
