#pragma once

#include <iosfwd>

namespace pmean::cli {

/// Exit codes: 0 success, 1 usage or other error (or a failed verify check),
/// 2 bad grid, 3 precision unreachable, 4 unknown check, 5 ill-conditioned fit.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace pmean::cli
