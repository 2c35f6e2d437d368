#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "app.hpp"

namespace {

constexpr const char* kFlags[][2] = {
    {"dist", "exponential | geometric | bernoulli"},
    {"mean", "exponential mean"},
    {"p0", "geometric P(w = 0)"},
    {"a", "direction (a, 1 - a)"},
    {"n", "scale: level of the sink, or interface length"},
    {"ladder", "comma-separated scales for stabilization"},
    {"window", "observation window WxH"},
    {"L", "stationary grid size"},
    {"reps", "replicates"},
    {"seed", "master seed"},
    {"workers", "worker threads (0 = all cores)"},
    {"out", "output directory"},
    {"format", "comma-separated: csv,json,svg"},
};

}  // namespace

int main(int argc, char** argv) {
  using cornerlab::app::ConfigError;
  CLI::App cli{"Corner growth / last-passage percolation experiments"};
  cli.set_version_flag("--version", cornerlab::app::kVersion);
  std::string command, config_path;
  std::string list;
  for (const auto& c : cornerlab::app::commands()) list += (list.empty() ? "" : ", ") + c;
  cli.add_option("command", command, "one of: " + list)->required();
  cli.add_option("-c,--config", config_path, "key = value configuration file");
  std::map<std::string, std::string> flags;
  for (const auto& [name, help] : kFlags) cli.add_option(std::string("--") + name, flags[name], help);

  try {
    cli.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return cli.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return cli.exit(e);
  } catch (const CLI::ParseError& e) {
    cli.exit(e);
    return 2;
  }

  cornerlab::app::ExperimentConfig cfg;
  try {
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw ConfigError("config", 0, "cannot open " + config_path);
      try {
        cornerlab::app::parse_config(cfg, in);
      } catch (const ConfigError& e) {
        throw ConfigError(e.field(), e.line(), config_path + ": " + e.what());
      }
    }
    cfg.command = command;
    for (const auto& [name, help] : kFlags) {
      if (cli.count(std::string("--") + name)) cornerlab::app::set_field(cfg, name, flags[name]);
    }
    return cornerlab::app::run(cfg, std::cout);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
