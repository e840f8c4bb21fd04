#pragma once

#include <iosfwd>

namespace nestdop::cli {

/// Runs the nestdop command line. Returns the process exit code:
/// 0 success, 2 configuration or usage error, 3 numeric or precondition
/// failure.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace nestdop::cli
