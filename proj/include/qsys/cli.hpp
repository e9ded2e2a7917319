#pragma once

#include <iosfwd>

namespace qsys::cli {

inline constexpr int kUsageError = 64;

/// Runs the command line; returns the process exit code.
int dispatch(int argc, const char* const* argv, std::ostream& out,
             std::ostream& err);

}  // namespace qsys::cli
