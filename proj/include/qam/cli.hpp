#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace qam::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNumerical = 3;

struct ConfigEntry {
  std::string key;
  std::string value;
  std::size_t line = 0;
};

/// Reads a plain `key=value` file. Blank lines and lines starting with '#'
/// are skipped. Throws ValidationError naming the line on malformed input.
std::vector<ConfigEntry> load_config_file(const std::filesystem::path& path);

/// Parses `args` (without the program name) and runs the chosen subcommand.
/// Results go to `out` when --out is "-", the resolved configuration and
/// diagnostics to `err`. Returns the process exit status.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qam::cli
