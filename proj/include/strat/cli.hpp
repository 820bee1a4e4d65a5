#ifndef STRAT_CLI_HPP
#define STRAT_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace strat {

// Entry point shared by the binary and the golden-suite runner.  Writes the
// result document to `out`, the report to `err`, and returns the exit code:
// 0 ok, 1 validation/math error, 2 inconclusive under the configured caps.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace strat

#endif  // STRAT_CLI_HPP
