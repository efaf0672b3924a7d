#pragma once

#include <string>
#include <vector>

namespace kaczmarz {

// Exit codes of the command-line front end.
inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;

// Entry point behind the `kaczmarz` binary; also callable in-process so the
// tests can drive the exact command surface. args excludes the program name.
int run_cli(const std::vector<std::string>& args);
int run_cli(int argc, char** argv);

}  // namespace kaczmarz
