#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "twoin1/accrual.hpp"
#include "twoin1/commands.hpp"
#include "twoin1/config.hpp"

namespace {

struct CliArgs {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::optional<std::string> out_dir;
  std::optional<std::string> format;
};

void add_common(CLI::App* cmd, CliArgs& args) {
  cmd->add_option("--config", args.config_path, "path to the JSON run configuration")
      ->required();
  cmd->add_option("--seed", args.seed, "override the config seed");
  cmd->add_option("--threads", args.threads,
                  "worker threads (default: TWOIN1_THREADS, then hardware)");
  cmd->add_option("--out", args.out_dir, "override the output directory");
  cmd->add_option("--format", args.format, "table format: csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
}

twoin1::RunConfig load_with_overrides(const CliArgs& args) {
  twoin1::RunConfig cfg = twoin1::load_config(args.config_path);
  if (args.seed) cfg.seed = *args.seed;
  if (args.threads) cfg.threads = *args.threads;
  if (args.out_dir) cfg.output.dir = *args.out_dir;
  if (args.format) cfg.output.format = *args.format;
  for (const auto& w : cfg.warnings) std::cerr << "warning: " << w << "\n";
  return cfg;
}

int run(const std::string& command, const CliArgs& args) {
  twoin1::RunConfig cfg = load_with_overrides(args);
  twoin1::Report report;
  if (command == "cmin") {
    report = twoin1::cmd_cmin(cfg);
  } else if (command == "type1-curve") {
    report = twoin1::cmd_type1_curve(cfg);
  } else if (command == "oc") {
    report = twoin1::cmd_oc(cfg);
  } else {
    report = twoin1::cmd_power_study(cfg);
  }
  for (const auto& path : twoin1::emit_report(report, cfg.output)) {
    std::cout << path << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Design and evaluation engine for flexible seamless 2-in-1 trials"};
  app.require_subcommand(1);

  CliArgs args;
  std::string command;
  for (const char* name : {"cmin", "type1-curve", "oc", "power-study"}) {
    CLI::App* sub = app.add_subcommand(name);
    add_common(sub, args);
    sub->callback([&command, name]() { command = name; });
  }
  app.get_subcommand("cmin")->description("solve the minimal safe interim cutoff");
  app.get_subcommand("type1-curve")->description("tabulate the analytic type-I error curve");
  app.get_subcommand("oc")->description("simulate operating characteristics");
  app.get_subcommand("power-study")->description("power / expansion sweeps over HR and ORR");

  CLI11_PARSE(app, argc, argv);

  try {
    return run(command, args);
  } catch (const twoin1::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const twoin1::SaturationError& e) {
    std::cerr << "saturation: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
