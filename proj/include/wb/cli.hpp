#pragma once

#include <iostream>

namespace wb {

// Entry point of the wb tool. Exit codes: 0 success, 1 a check failed or a
// result is inconclusive, 2 usage, parse or I/O error.
int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout,
            std::ostream& err = std::cerr);

}  // namespace wb
