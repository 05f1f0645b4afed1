#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace somit::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kValidation = 1;
inline constexpr int kNumeric = 2;
inline constexpr int kIo = 3;

// Runs one command line (args excludes the program name). Prompts and tables
// go to `out`; the single "error[kind]: ..." line goes to `err`.
int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace somit::cli
