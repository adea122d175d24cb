#pragma once

#include <ostream>

namespace sl3::cli {

// Exit codes: 0 ok, 1 verification failure, 2 bad configuration, 3 numerical non-convergence.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace sl3::cli
