#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace veracity::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 2;
inline constexpr int kExitNumericFailure = 3;

// Runs one subcommand (screen, features, manova, train, evaluate, predict,
// roc-export). args excludes the program name. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace veracity::cli
