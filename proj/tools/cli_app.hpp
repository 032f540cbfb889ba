#pragma once

#include <ostream>

namespace beamband::cli {

// Exit codes: 0 success, 1 runtime failure, 2 bad flags or configuration.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace beamband::cli
