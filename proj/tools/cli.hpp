#pragma once

#include <iosfwd>

namespace twdp::cli {

/// Exit codes of the twdp tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitNumerical = 2;

/// Entry point shared by the executable and the tests. Regular output goes to
/// `out` unless --out names a file; diagnostics go to `err`.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace twdp::cli
