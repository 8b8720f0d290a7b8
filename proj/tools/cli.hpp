#pragma once

#include <iosfwd>

namespace grenlab::cli {

// Exit codes: 0 success, 2 configuration error (including unknown flags),
// 3 a pre-registered check of the run failed, 1 any other failure.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace grenlab::cli
