// cfaraday: command-line driver. Exit codes: 0 all checks pass, 1 a check
// failed or a numerical error was raised, 2 configuration error.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "cfaraday/error.hpp"
#include "commands.hpp"

namespace {

struct Flags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  std::string format = "csv";
  bool exact = false;
  bool svg = false;
  bool inject_fault = false;
  bool quiet = false;
};

void print_error(const std::string& command, const std::string& code, const std::string& message) {
  nlohmann::json j{{"command", command}, {"pass", false}, {"error", {{"code", code}, {"message", message}}}};
  std::cout << j.dump(2) << '\n';
  std::cerr << "error: " << message << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Complex Faraday tensor and Born-Infeld verification suite"};
  app.set_version_flag("--version", cfcli::kVersion);
  app.require_subcommand(1);

  Flags flags;
  for (const auto& cmd : cfcli::commands()) {
    auto* sub = app.add_subcommand(cmd.name, cmd.description);
    sub->add_option("--config", flags.config_path, "JSON config file");
    sub->add_option("--seed", flags.seed, "RNG seed override");
    sub->add_option("--out", flags.out_dir, "directory for CSV/JSON tables and plots");
    sub->add_option("--format", flags.format, "table format")->check(CLI::IsMember({"csv", "json"}));
    sub->add_flag("--svg", flags.svg, "also write SVG line plots");
    sub->add_flag("--quiet", flags.quiet, "print only the overall verdict");
    if (cmd.name == "verify-identities" || cmd.name == "lagrangian-eval") {
      sub->add_flag("--exact", flags.exact, "rational domain");
    }
    if (cmd.name == "verify-identities") {
      sub->add_flag("--inject-fault", flags.inject_fault, "debug: flip the dual sign in the complex tensor");
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    cfcli::json user;
    if (!flags.config_path.empty()) user = cfcli::load_config_file(flags.config_path, command);
    cfcli::FlagOverrides overrides{flags.seed, flags.exact, flags.inject_fault};
    const auto report = cfcli::run_command(command, user, overrides);

    cfcli::OutputOptions out;
    if (!flags.out_dir.empty()) out.dir = flags.out_dir;
    out.format = flags.format == "json" ? cfcli::Format::Json : cfcli::Format::Csv;
    out.svg = flags.svg;
    cfcli::write_outputs(report, out);

    if (flags.quiet) {
      std::cout << command << ": " << (report.pass() ? "PASS" : "FAIL") << '\n';
    } else {
      std::cout << report.to_json(true).dump(2) << '\n';
    }
    for (const auto& c : report.checks) {
      if (!c.pass) std::cerr << "FAIL " << c.name << ": expected " << c.expected << ", got " << c.actual << '\n';
    }
    return report.pass() ? 0 : 1;
  } catch (const cfcli::ConfigError& e) {
    print_error(command, "CONFIG", e.what());
    return 2;
  } catch (const nlohmann::json::exception& e) {
    print_error(command, "CONFIG", e.what());
    return 2;
  } catch (const cfaraday::Error& e) {
    print_error(command, std::string(cfaraday::to_string(e.code())), e.what());
    return e.code() == cfaraday::ErrorCode::InvalidArgument ? 2 : 1;
  } catch (const std::exception& e) {
    print_error(command, "INTERNAL", e.what());
    return 1;
  }
}
