#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace budlaw::cli {

// Runs one command line (args exclude the program name). Results go to `out`
// as JSON; usage messages go to `err`. Returns 0, 1 (structured error JSON on
// `out`) or 2 (usage).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace budlaw::cli
