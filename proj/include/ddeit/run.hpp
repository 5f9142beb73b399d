#pragma once

#include <string>
#include <vector>

namespace ddeit {

// CLI entry point: subcommands sweep, dressed, doppler, windows, match.
// Returns 0 on success, 2 on configuration errors, 3 on numerical failures.
int run(const std::vector<std::string>& args);

} // namespace ddeit
