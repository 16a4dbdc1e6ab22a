#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace damteval {

// Entry point of the `damteval` tool. Results go to `out` (unless --out is
// given), diagnostics to `err` as `ERROR <code>: <message>`. Returns the exit
// code: 0 on success, 1 on a domain error, 2 on a usage error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace damteval
