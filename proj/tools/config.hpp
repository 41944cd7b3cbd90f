#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "output.hpp"

namespace cfcli {

/// Overrides applied on top of the config file, in this order.
struct FlagOverrides {
  std::optional<std::uint64_t> seed;
  bool exact = false;
  bool inject_fault = false;
};

/// Reads a JSON config file. A top-level object keyed by the command name
/// selects that section; otherwise the whole object applies.
json load_config_file(const std::filesystem::path& path, const std::string& command);

/// Defaults merged with the user object. Unknown keys are rejected so typos
/// cannot silently fall back to defaults.
json resolve_config(const json& defaults, const json& user, const FlagOverrides& flags);

// Typed access; every failure is a ConfigError naming the key.
double get_double(const json& c, const std::string& key);
double get_positive(const json& c, const std::string& key);
int get_int(const json& c, const std::string& key, int min_value);
bool get_bool(const json& c, const std::string& key);
std::string get_string(const json& c, const std::string& key);
std::string get_choice(const json& c, const std::string& key, const std::vector<std::string>& choices);
std::uint64_t get_seed(const json& c);
std::vector<double> get_doubles(const json& c, const std::string& key, std::size_t min_size);
std::vector<int> get_ints(const json& c, const std::string& key, std::size_t min_size, int min_value);
std::vector<std::string> get_strings(const json& c, const std::string& key, std::size_t min_size);

}  // namespace cfcli
