#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rulerkit::cli {

// Dispatches to the named subcommand. Args exclude the program name.
// Exit codes: 0 success, 1 flag/validation error, 2 computation or parse
// error. Machine-readable output goes to out, diagnostics to err.
int run(std::vector<std::string> args, std::ostream& out, std::ostream& err);

} // namespace rulerkit::cli
