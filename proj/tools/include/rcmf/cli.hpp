#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rcmf::cli {

// Parse and dispatch one command line (argv without the program name).
// Records go to `out` (JSON Lines by default), diagnostics to `err`.
// Exit codes: 0 success, 2 validation/usage error, 3 resource-cap error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Default seed: fixed and published so documented numbers reproduce exactly.
inline constexpr unsigned long long kDefaultSeed = 1729;

} // namespace rcmf::cli
