#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "config.hpp"
#include "output.hpp"

namespace cfcli {

struct Command {
  std::string name;
  std::string description;
  std::function<json()> defaults;
  /// Takes the resolved config. Config problems throw ConfigError before
  /// any computation starts.
  std::function<ReportEnvelope(const json&)> run;
};

const std::vector<Command>& commands();
/// Throws ConfigError for an unknown name.
const Command& find_command(const std::string& name);

/// Resolves the config, runs the command and fills in wall_time.
ReportEnvelope run_command(const std::string& name, const json& user, const FlagOverrides& flags = {});

// Per-command entry points.
json identities_defaults();
ReportEnvelope cmd_verify_identities(const json& config);
json lagrangian_eval_defaults();
ReportEnvelope cmd_lagrangian_eval(const json& config);
json saddle_defaults();
ReportEnvelope cmd_saddle(const json& config);
json action_check_defaults();
ReportEnvelope cmd_action_check(const json& config);
json evolve_defaults();
ReportEnvelope cmd_evolve(const json& config);
json bi_electrostatic_defaults();
ReportEnvelope cmd_bi_electrostatic(const json& config);

/// Uniform double in [0, 1) from the top 53 bits.
inline double unit_uniform(std::uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1p-53; }

/// "<= 1e-12" style expectation text.
std::string within(double tolerance);

}  // namespace cfcli
