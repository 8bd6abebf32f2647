#pragma once

#include <iosfwd>

namespace popuc::cli {

/// Exit codes: 0 success, 1 verification failure, 2 config/validation error,
/// 3 numerical failure.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace popuc::cli
