#include "config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace hybridop::cli {

namespace {

enum class Kind { Size, SizeOrZero, Seed, Real, RealOrZero, Mode, Format, Rule, Bool, SizeGrid, DeltaGrid, Support, Signs, Matrix, OptMatrix, Vector };

struct KeySpec {
  std::string key;
  Kind kind;
  Json value;
};

using Table = std::vector<KeySpec>;

Table defaults_for(const std::string& command) {
  const Json million = 1000000;
  if (command == "enumerate") return {{"mode", Kind::Mode, "canonical"}, {"n", Kind::Size, 200}, {"format", Kind::Format, "csv"}};
  if (command == "build") {
    return {{"mode", Kind::Mode, "canonical"}, {"n", Kind::Size, 50}, {"m", Kind::SizeOrZero, 0}, {"format", Kind::Format, "csv"}};
  }
  if (command == "select") {
    return {{"mode", Kind::Mode, "canonical"}, {"L", Kind::Size, 5}, {"budget", Kind::Size, million}, {"format", Kind::Format, "json"}};
  }
  if (command == "tikhonov") {
    return {{"mode", Kind::Mode, "no-singleton"}, {"L", Kind::Size, 10},       {"budget", Kind::Size, million},
            {"atoms", Kind::Size, 3},             {"delta", Kind::RealOrZero, 1e-3}, {"alpha", Kind::Real, 1e-3},
            {"seed", Kind::Seed, 1},              {"format", Kind::Format, "json"}};
  }
  if (command == "study") {
    return {{"mode", Kind::Mode, "no-singleton"},
            {"L", Kind::Size, 10},
            {"budget", Kind::Size, million},
            {"atoms", Kind::Size, 3},
            {"deltas", Kind::DeltaGrid, Json::array({1e-1, 1e-2, 1e-3, 1e-4})},
            {"rule", Kind::Rule, "apriori"},
            {"c", Kind::Real, 1.0},
            {"tau", Kind::Real, 1.5},
            {"seed", Kind::Seed, 1},
            {"format", Kind::Format, "csv"}};
  }
  if (command == "probe") {
    return {{"mode", Kind::Mode, "no-singleton"},
            {"n_grid", Kind::SizeGrid, Json::array({50, 100, 200, 400})},
            {"m", Kind::SizeOrZero, 0},
            {"data_rows", Kind::Size, 3},
            {"alpha", Kind::Real, 1e-2},
            {"seed", Kind::Seed, 1},
            {"format", Kind::Format, "csv"}};
  }
  if (command == "certify") {
    return {{"mode", Kind::Mode, "canonical"},         {"support", Kind::Support, Json::array({1, 3})},
            {"signs", Kind::Signs, Json::array({1, 1})}, {"n", Kind::Size, 200},
            {"format", Kind::Format, "json"}};
  }
  if (command == "rank") {
    return {{"mode", Kind::Mode, "adversarial-prefix:100"},
            {"n_grid", Kind::SizeGrid, Json::array({10, 50, 100})},
            {"m", Kind::SizeOrZero, 0},
            {"format", Kind::Format, "csv"}};
  }
  if (command == "qdist") {
    return {{"A", Kind::Matrix, Json::array({Json::array({1.0, 1.0})})},
            {"Z", Kind::OptMatrix, nullptr},
            {"y", Kind::Vector, Json::array({0.0})},
            {"y_prime", Kind::Vector, Json::array({1.0})},
            {"dump_lp", Kind::Bool, false},
            {"format", Kind::Format, "json"}};
  }
  if (command == "classify") return {{"format", Kind::Format, "json"}};
  if (command == "factor") {
    return {{"rows", Kind::Size, 6},       {"cols", Kind::Size, 4},     {"rank", Kind::Size, 3},
            {"pairs", Kind::Size, 25},     {"samples", Kind::Size, 100}, {"tol", Kind::Real, 1e-9},
            {"seed", Kind::Seed, 1},       {"format", Kind::Format, "csv"}};
  }
  throw ConfigError("<command>", "unknown subcommand '" + command + "'");
}

std::size_t line_of_offset(const std::string& text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

std::size_t line_of_key(const std::string& text, const std::string& key) {
  const std::size_t pos = text.find('"' + key + '"');
  return pos == std::string::npos ? 1 : line_of_offset(text, pos);
}

bool is_size(const Json& v) { return v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0); }

bool is_finite_number(const Json& v) { return v.is_number() && std::isfinite(v.get<double>()); }

// Returns an error message, empty when the value fits the kind.
std::string check(Kind kind, const Json& v) {
  switch (kind) {
    case Kind::Size:
      return is_size(v) && v.get<std::uint64_t>() > 0 ? "" : "expected a positive integer";
    case Kind::SizeOrZero:
    case Kind::Seed:
      return is_size(v) ? "" : "expected a nonnegative integer";
    case Kind::Real:
      return is_finite_number(v) && v.get<double>() > 0.0 ? "" : "expected a positive number";
    case Kind::RealOrZero:
      return is_finite_number(v) && v.get<double>() >= 0.0 ? "" : "expected a nonnegative number";
    case Kind::Mode:
      if (!v.is_string()) return "expected a mode string";
      try {
        parse_mode(v.get<std::string>());
      } catch (const Error& e) {
        return e.what();
      }
      return "";
    case Kind::Format:
      return v == "csv" || v == "json" ? "" : "expected \"csv\" or \"json\"";
    case Kind::Rule:
      return v == "apriori" || v == "discrepancy" ? "" : "expected \"apriori\" or \"discrepancy\"";
    case Kind::Bool:
      return v.is_boolean() ? "" : "expected true or false";
    case Kind::SizeGrid: {
      if (!v.is_array() || v.empty()) return "expected a nonempty array of positive integers";
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (!is_size(v[i]) || v[i].get<std::uint64_t>() == 0) return "expected a nonempty array of positive integers";
        if (i > 0 && !(v[i].get<std::uint64_t>() > v[i - 1].get<std::uint64_t>())) return "grid must be strictly ascending";
      }
      return "";
    }
    case Kind::DeltaGrid: {
      if (!v.is_array() || v.empty()) return "expected a nonempty array of positive numbers";
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (!is_finite_number(v[i]) || !(v[i].get<double>() > 0.0)) return "expected a nonempty array of positive numbers";
        if (i > 0 && !(v[i].get<double>() < v[i - 1].get<double>())) return "noise grid must be strictly descending";
      }
      return "";
    }
    case Kind::Support:
      if (!v.is_array() || v.size() != 2 || !is_size(v[0]) || !is_size(v[1]) || v[0] == 0 || v[1] == 0) {
        return "expected two positive indices";
      }
      return v[0] == v[1] ? "support indices must differ" : "";
    case Kind::Signs:
      if (!v.is_array() || v.size() != 2) return "expected two signs";
      for (const auto& s : v) {
        if (s != 1 && s != -1) return "signs must be 1 or -1";
      }
      return "";
    case Kind::OptMatrix:
      if (v.is_null()) return "";
      [[fallthrough]];
    case Kind::Matrix: {
      if (!v.is_array() || v.empty() || !v[0].is_array()) return "expected a nonempty array of rows";
      const std::size_t cols = v[0].size();
      for (const auto& row : v) {
        if (!row.is_array() || row.size() != cols) return "rows must have equal length";
        for (const auto& x : row) {
          if (!is_finite_number(x)) return "entries must be finite numbers";
        }
      }
      return cols == 0 && kind == Kind::Matrix ? "expected at least one column" : "";
    }
    case Kind::Vector:
      if (!v.is_array() || v.empty()) return "expected a nonempty array of numbers";
      for (const auto& x : v) {
        if (!is_finite_number(x)) return "entries must be finite numbers";
      }
      return "";
  }
  return "unsupported value";
}

}  // namespace

std::vector<std::string> ExperimentConfig::commands() {
  return {"enumerate", "build", "select", "tikhonov", "study", "probe",
          "certify",   "rank",  "qdist",  "classify", "factor"};
}

ExperimentConfig ExperimentConfig::resolve(const std::string& command, const std::optional<std::string>& path,
                                           const FlagOverrides& flags) {
  if (!path) return resolve_text(command, "", "<defaults>", flags);
  std::ifstream in(*path, std::ios::binary);
  if (!in) throw ConfigError(*path, "cannot open config file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return resolve_text(command, ss.str(), *path, flags);
}

ExperimentConfig ExperimentConfig::resolve_text(const std::string& command, const std::string& text,
                                                const std::string& source, const FlagOverrides& flags) {
  ExperimentConfig cfg;
  cfg.command_ = command;
  cfg.source_ = source;
  const Table table = defaults_for(command);
  cfg.values_ = Json::object();
  for (const auto& spec : table) {
    cfg.values_[spec.key] = spec.value;
    cfg.origin_[spec.key] = "<default " + spec.key + ">";
  }

  if (!text.empty()) {
    Json file;
    try {
      file = Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw ConfigError(source + ":" + std::to_string(line_of_offset(text, e.byte == 0 ? 0 : e.byte - 1)),
                        "malformed JSON");
    }
    if (!file.is_object()) throw ConfigError(source + ":1", "config must be a JSON object");
    for (const auto& [key, value] : file.items()) {
      const std::string where = source + ":" + std::to_string(line_of_key(text, key));
      if (key == "command") {
        if (value != command) throw ConfigError(where, "config is for '" + value.dump() + "', not '" + command + "'");
        continue;
      }
      auto it = std::find_if(table.begin(), table.end(), [&](const KeySpec& s) { return s.key == key; });
      if (it == table.end()) throw ConfigError(where, "unknown key '" + key + "' for " + command);
      if (const std::string msg = check(it->kind, value); !msg.empty()) throw ConfigError(where, key + ": " + msg);
      cfg.values_[key] = value;
      cfg.origin_[key] = where;
    }
  }

  auto override_with = [&](const std::string& key, const Json& value, const std::string& flag) {
    auto it = std::find_if(table.begin(), table.end(), [&](const KeySpec& s) { return s.key == key; });
    if (it == table.end()) throw ConfigError(flag, command + " does not take " + flag);
    if (const std::string msg = check(it->kind, value); !msg.empty()) throw ConfigError(flag, msg);
    cfg.values_[key] = value;
    cfg.origin_[key] = flag;
  };
  if (flags.mode) override_with("mode", *flags.mode, "--mode");
  if (flags.n) override_with("n", *flags.n, "--n");
  if (flags.m) override_with("m", *flags.m, "--m");
  if (flags.L) override_with("L", *flags.L, "--L");
  if (flags.seed) override_with("seed", *flags.seed, "--seed");
  if (flags.format) override_with("format", *flags.format, "--format");

  Json echo = Json::object();
  echo["command"] = command;
  for (const auto& [k, v] : cfg.values_.items()) echo[k] = v;
  cfg.values_ = std::move(echo);
  cfg.validate();
  return cfg;
}

void ExperimentConfig::fail(const std::string& key, const std::string& what) const {
  auto it = origin_.find(key);
  throw ConfigError(it == origin_.end() ? source_ : it->second, what);
}

void ExperimentConfig::validate() const {
  if (command_ == "tikhonov" || command_ == "study") {
    if (size("atoms") > size("L")) fail("atoms", "atoms exceeds the selection depth L");
  }
  if (command_ == "certify") {
    const auto s = sizes("support");
    if (size("n") < std::max(s[0], s[1])) fail("n", "constraint count must reach the support indices");
  }
  if (command_ == "probe" && size("m") != 0 && size("data_rows") > size("m")) {
    fail("data_rows", "data rows exceed the row frame m");
  }
  if (command_ == "factor") {
    if (size("rank") > std::min(size("rows"), size("cols"))) fail("rank", "rank exceeds min(rows, cols)");
  }
  if (command_ == "qdist") {
    const auto a = matrix("A");
    if (reals("y").size() != a.size()) fail("y", "y length differs from the rows of A");
    if (reals("y_prime").size() != a.size()) fail("y_prime", "y_prime length differs from the rows of A");
    if (!is_null("Z") && matrix("Z").size() != a[0].size()) fail("Z", "Z rows differ from the columns of A");
  }
}

EnumerationMode ExperimentConfig::mode() const { return parse_mode(text("mode")); }
std::size_t ExperimentConfig::size(const std::string& key) const { return values_.at(key).get<std::size_t>(); }
std::uint64_t ExperimentConfig::seed() const { return values_.at("seed").get<std::uint64_t>(); }
double ExperimentConfig::real(const std::string& key) const { return values_.at(key).get<double>(); }
bool ExperimentConfig::flag(const std::string& key) const { return values_.at(key).get<bool>(); }
std::string ExperimentConfig::text(const std::string& key) const { return values_.at(key).get<std::string>(); }
std::vector<std::size_t> ExperimentConfig::sizes(const std::string& key) const {
  return values_.at(key).get<std::vector<std::size_t>>();
}
std::vector<double> ExperimentConfig::reals(const std::string& key) const {
  return values_.at(key).get<std::vector<double>>();
}
std::vector<int> ExperimentConfig::ints(const std::string& key) const { return values_.at(key).get<std::vector<int>>(); }
std::vector<std::vector<double>> ExperimentConfig::matrix(const std::string& key) const {
  return values_.at(key).get<std::vector<std::vector<double>>>();
}
bool ExperimentConfig::is_null(const std::string& key) const { return values_.at(key).is_null(); }

}  // namespace hybridop::cli
