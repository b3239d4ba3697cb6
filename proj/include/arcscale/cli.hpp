#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace arcscale::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUserError = 1;
inline constexpr int kExitInternalError = 2;

/// Runs one command line (without the program name). Data goes to `out` or
/// to files, diagnostics to `err`; "-" names `in`/`out` for single-series
/// commands.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err);

}  // namespace arcscale::cli
