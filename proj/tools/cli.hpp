#pragma once

#include <ostream>

namespace ncerg::cli {

/// Parses arguments, runs one subcommand and writes its report.
/// Returns 0 on success, 1 on a failed verification, 2 on malformed input.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ncerg::cli
