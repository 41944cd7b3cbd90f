#include "commands.hpp"

#include <chrono>

namespace cfcli {

const std::vector<Command>& commands() {
  static const std::vector<Command> all{
      {"verify-identities", "determinant, Pfaffian and Lagrangian identity suite over random field points",
       identities_defaults, cmd_verify_identities},
      {"lagrangian-eval", "every Lagrangian density at one field point", lagrangian_eval_defaults,
       cmd_lagrangian_eval},
      {"saddle", "stationary points of analytic functions and the sampled min-max check", saddle_defaults,
       cmd_saddle},
      {"action-check", "lattice action gradients, finite-difference oracle and equivalence report",
       action_check_defaults, cmd_action_check},
      {"evolve", "Riemann-Silberstein evolution with energy, Gauss and scheme diagnostics", evolve_defaults,
       cmd_evolve},
      {"bi-electrostatic", "Born-Infeld point charge profile and energy convergence", bi_electrostatic_defaults,
       cmd_bi_electrostatic},
  };
  return all;
}

const Command& find_command(const std::string& name) {
  for (const auto& c : commands()) {
    if (c.name == name) return c;
  }
  throw ConfigError("unknown command '" + name + "'");
}

ReportEnvelope run_command(const std::string& name, const json& user, const FlagOverrides& flags) {
  const auto& cmd = find_command(name);
  const json resolved = resolve_config(cmd.defaults(), user, flags);
  const auto start = std::chrono::steady_clock::now();
  ReportEnvelope r = cmd.run(resolved);
  r.command = name;
  r.config = resolved;
  r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

std::string within(double tolerance) { return "<= " + fmt(tolerance); }

}  // namespace cfcli
