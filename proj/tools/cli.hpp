#pragma once

#include <iosfwd>

namespace accmag::cli {

/// Runs the command line; returns the process exit code (0 ok, 1 processing
/// error, 2 argument error).
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace accmag::cli
