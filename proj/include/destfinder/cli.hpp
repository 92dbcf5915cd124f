#pragma once

#include <iosfwd>

namespace destfinder {

/// Entry point of the `destfinder` tool. Exit codes: 0 success, 1 invalid
/// input data, 2 usage or environment failure.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace destfinder
