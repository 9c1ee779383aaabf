#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hybridop::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

/// Environment variable naming the default output directory.
inline constexpr const char* kOutEnv = "HYBRIDOP_OUT";

/// Parses `args` (without the program name), runs the subcommand and
/// writes its artifacts plus manifest.json. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Hex SHA-256 of a byte string.
std::string sha256_hex(const std::string& bytes);

}  // namespace hybridop::cli
