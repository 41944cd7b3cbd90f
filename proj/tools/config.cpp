#include "config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

namespace cfcli {

namespace {

void check_keys(const json& defaults, const json& user, const std::string& path) {
  if (!user.is_object()) throw ConfigError("config " + (path.empty() ? std::string("root") : path) + " must be an object");
  for (const auto& [key, value] : user.items()) {
    const std::string where = path.empty() ? key : path + "." + key;
    if (!defaults.contains(key)) throw ConfigError("unknown config key '" + where + "'");
    if (defaults[key].is_object()) check_keys(defaults[key], value, where);
  }
}

const json& at(const json& c, const std::string& key) {
  if (!c.contains(key)) throw ConfigError("missing config key '" + key + "'");
  return c[key];
}

}  // namespace

json load_config_file(const std::filesystem::path& path, const std::string& command) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  json j;
  try {
    j = json::parse(in, nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw ConfigError("config file " + path.string() + ": " + e.what());
  }
  if (j.is_object() && j.contains(command) && j[command].is_object()) return j[command];
  return j;
}

json resolve_config(const json& defaults, const json& user, const FlagOverrides& flags) {
  json out = defaults;
  if (!user.is_null()) {
    check_keys(defaults, user, "");
    out.merge_patch(user);
  }
  if (flags.seed) out["seed"] = *flags.seed;
  if (flags.exact) {
    if (!out.contains("exact")) throw ConfigError("--exact is not supported by this command");
    out["exact"] = true;
  }
  if (flags.inject_fault) {
    if (!out.contains("inject_fault")) throw ConfigError("--inject-fault is not supported by this command");
    out["inject_fault"] = true;
  }
  return out;
}

double get_double(const json& c, const std::string& key) {
  const auto& v = at(c, key);
  if (!v.is_number()) throw ConfigError("'" + key + "' must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ConfigError("'" + key + "' must be finite");
  return d;
}

double get_positive(const json& c, const std::string& key) {
  const double d = get_double(c, key);
  if (!(d > 0.0)) throw ConfigError("'" + key + "' must be positive");
  return d;
}

int get_int(const json& c, const std::string& key, int min_value) {
  const auto& v = at(c, key);
  if (!v.is_number_integer()) throw ConfigError("'" + key + "' must be an integer");
  const auto i = v.get<long long>();
  if (i < min_value || i > 1'000'000'000) {
    throw ConfigError("'" + key + "' must be an integer >= " + std::to_string(min_value));
  }
  return static_cast<int>(i);
}

bool get_bool(const json& c, const std::string& key) {
  const auto& v = at(c, key);
  if (!v.is_boolean()) throw ConfigError("'" + key + "' must be true or false");
  return v.get<bool>();
}

std::string get_string(const json& c, const std::string& key) {
  const auto& v = at(c, key);
  if (!v.is_string()) throw ConfigError("'" + key + "' must be a string");
  return v.get<std::string>();
}

std::string get_choice(const json& c, const std::string& key, const std::vector<std::string>& choices) {
  const auto s = get_string(c, key);
  if (std::find(choices.begin(), choices.end(), s) == choices.end()) {
    std::string list;
    for (const auto& ch : choices) list += (list.empty() ? "" : ", ") + ch;
    throw ConfigError("'" + key + "' must be one of: " + list);
  }
  return s;
}

std::uint64_t get_seed(const json& c) {
  const auto& v = at(c, "seed");
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
    throw ConfigError("'seed' must be a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

std::vector<double> get_doubles(const json& c, const std::string& key, std::size_t min_size) {
  const auto& v = at(c, key);
  if (!v.is_array() || v.size() < min_size) {
    throw ConfigError("'" + key + "' must be an array of at least " + std::to_string(min_size) + " numbers");
  }
  std::vector<double> out;
  for (const auto& x : v) {
    if (!x.is_number() || !std::isfinite(x.get<double>())) throw ConfigError("'" + key + "' must hold finite numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

std::vector<int> get_ints(const json& c, const std::string& key, std::size_t min_size, int min_value) {
  const auto& v = at(c, key);
  if (!v.is_array() || v.size() < min_size) {
    throw ConfigError("'" + key + "' must be an array of at least " + std::to_string(min_size) + " integers");
  }
  std::vector<int> out;
  for (const auto& x : v) {
    if (!x.is_number_integer() || x.get<long long>() < min_value || x.get<long long>() > 1'000'000) {
      throw ConfigError("'" + key + "' must hold integers >= " + std::to_string(min_value));
    }
    out.push_back(x.get<int>());
  }
  return out;
}

std::vector<std::string> get_strings(const json& c, const std::string& key, std::size_t min_size) {
  const auto& v = at(c, key);
  if (!v.is_array() || v.size() < min_size) {
    throw ConfigError("'" + key + "' must be an array of at least " + std::to_string(min_size) + " strings");
  }
  std::vector<std::string> out;
  for (const auto& x : v) {
    if (!x.is_string()) throw ConfigError("'" + key + "' must hold strings");
    out.push_back(x.get<std::string>());
  }
  return out;
}

}  // namespace cfcli
