#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace knotdimer::cli {

/// Runs one command line (without the program name). Returns the exit
/// status: 0 ok, 1 disagreement or failed check, 2 input error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace knotdimer::cli
