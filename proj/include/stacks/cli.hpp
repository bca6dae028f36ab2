#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace stacks {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitInvariant = 3;

/// Entry point of the `stacks` tool. `args` excludes the program name. Normal output goes to `out`,
/// diagnostics to `err`. Returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Reads a key=value config file into "--key=value" arguments. Blank lines and '#' comments are
/// skipped. Throws InputError naming the file and line on anything else.
std::vector<std::string> config_arguments(const std::string& path);

}  // namespace stacks
