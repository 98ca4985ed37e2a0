#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "commands.hpp"

namespace {

using namespace fdbem::cli;

struct Options {
  std::string config;
  std::vector<std::string> set;
  std::map<std::string, std::string> flags;
};

void add_config_options(CLI::App* cmd, Options& opt) {
  cmd->add_option("--config", opt.config, "key = value configuration file");
  cmd->add_option("--set", opt.set, "override key=value (repeatable)");
  for (const auto& [key, help] : config_keys()) {
    cmd->add_option("--" + key, opt.flags[key], help);
  }
}

// File first, then --set, then per-key flags.
RunConfig resolve(const Options& opt, CLI::App* cmd) {
  Overrides pairs;
  if (!opt.config.empty()) pairs = read_config_file(opt.config);
  for (const auto& kv : opt.set) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + kv + "'");
    pairs[kv.substr(0, eq)] = kv.substr(eq + 1);
  }
  for (const auto& [key, value] : opt.flags) {
    if (cmd->count("--" + key)) pairs[key] = value;
  }
  return make_config(pairs);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fast directional Burton-Miller BEM for exterior Helmholtz problems"};
  app.require_subcommand(1);

  Options solve_opt, verify_opt, bench_opt;
  std::string level = "all";
  CLI::App* solve = app.add_subcommand("solve", "solve one problem, write CSV and summary");
  CLI::App* verify = app.add_subcommand("verify", "run a verification suite");
  CLI::App* bench = app.add_subcommand("benchmark", "sphere family scaling table");
  add_config_options(solve, solve_opt);
  add_config_options(verify, verify_opt);
  add_config_options(bench, bench_opt);
  verify->add_option("--level", level, "kernels | operators | matvec | solve | all");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (solve->parsed()) return cmd_solve(resolve(solve_opt, solve));
    if (verify->parsed()) return cmd_verify(resolve(verify_opt, verify), level);
    return cmd_benchmark(resolve(bench_opt, bench));
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kUsage;
  } catch (const fdbem::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kUsage;
  }
}
