#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace citybrain::cli {

// Exit codes: 0 success, 1 runtime error, 2 invalid input.
inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntimeError = 1;
inline constexpr int kExitInvalidInput = 2;

// Run one CLI invocation. Results go to `out`, diagnostics to `err`.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace citybrain::cli
