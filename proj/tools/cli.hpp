#pragma once

#include <ostream>

namespace scq::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kInputError = 1;
inline constexpr int kNumericalError = 2;

// Entry point for the `scq` tool; diagnostics go to err.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace scq::cli
