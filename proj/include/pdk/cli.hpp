#pragma once

#include <iosfwd>

namespace pdk::cli {

/// Runs one subcommand. Returns 0 on success, 1 on invalid input and 2 on a
/// numerical failure (or a verification suite with failures).
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv);

}  // namespace pdk::cli
