#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace feynmat::cli {

/// Runs one command; `args` excludes the program name.  Returns 0 on success,
/// 1 on invalid input or options, 2 when a construction guarantee failed.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace feynmat::cli
