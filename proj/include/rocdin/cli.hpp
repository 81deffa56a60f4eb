#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rocdin::cli {

/// Runs one CLI invocation. args excludes the program name. Returns the
/// process exit code: 0 success, 1 computation failure, 2 usage/parse errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace rocdin::cli
