#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rgg::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitRuntime = 2;
inline constexpr int kExitVerifyFailed = 3;

/// Runs one command line (args excludes the program name). Results go to
/// `out`; errors are a single JSON line on `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run(int argc, char** argv);

}  // namespace rgg::cli
