#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mrmc {

/// Entry point behind the `mrmc` binary; separated so tests can drive it.
/// Returns the process exit code (0 ok, 1 pipeline error, 2 usage error).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mrmc
