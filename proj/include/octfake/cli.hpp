#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace octfake {

/// Runs one command line (without the program name). Returns the exit
/// status: 0 on success, 1 when a check or validation fails, 2 on bad flags.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace octfake
