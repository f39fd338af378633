#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hyperstab::cli {

/// Subcommand dispatch for the hyperstab tool; `args` excludes the program
/// name. Exit codes: 0 success, 1 a requested certificate was inapplicable
/// (or a solver gave up), 2 input error. Diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace hyperstab::cli
