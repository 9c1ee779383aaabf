#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "hybridop/seqspace.hpp"

namespace hybridop::cli {

using Json = nlohmann::ordered_json;

/// Invalid configuration; `where` is "file:line" or the offending flag.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string where, const std::string& what)
      : std::runtime_error(where + ": " + what), where_(std::move(where)) {}
  const std::string& where() const { return where_; }

 private:
  std::string where_;
};

/// Values given on the command line; each overrides the file.
struct FlagOverrides {
  std::optional<std::string> mode;
  std::optional<std::size_t> n;
  std::optional<std::size_t> m;
  std::optional<std::size_t> L;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> format;
};

/// Fully resolved experiment settings. Every key a subcommand reads has a
/// default, so echo() is complete and parse(echo()) reproduces it.
class ExperimentConfig {
 public:
  static std::vector<std::string> commands();

  /// Defaults for `command`, then the file (if any), then the flags.
  static ExperimentConfig resolve(const std::string& command, const std::optional<std::string>& path,
                                  const FlagOverrides& flags);
  /// Same, from JSON text already in memory; `source` names it in diagnostics.
  static ExperimentConfig resolve_text(const std::string& command, const std::string& text, const std::string& source,
                                       const FlagOverrides& flags);

  const std::string& command() const { return command_; }
  const Json& echo() const { return values_; }

  EnumerationMode mode() const;
  std::size_t size(const std::string& key) const;
  std::uint64_t seed() const;
  double real(const std::string& key) const;
  bool flag(const std::string& key) const;
  std::string text(const std::string& key) const;
  std::vector<std::size_t> sizes(const std::string& key) const;
  std::vector<double> reals(const std::string& key) const;
  std::vector<int> ints(const std::string& key) const;
  std::vector<std::vector<double>> matrix(const std::string& key) const;
  bool is_null(const std::string& key) const;

 private:
  void validate() const;
  [[noreturn]] void fail(const std::string& key, const std::string& what) const;

  std::string command_;
  Json values_;
  std::string source_;
  std::map<std::string, std::string> origin_;  // key -> "file:line" or "--flag"
};

}  // namespace hybridop::cli
