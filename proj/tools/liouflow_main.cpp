#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "liouflow/cli.hpp"
#include "liouflow/core.hpp"

namespace {

struct SubcommandArgs {
  std::string config_path;
  std::string out_dir = ".";
  std::uint64_t seed = 0;
  bool seed_given = false;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"liouflow: state-space flow fields and distribution transport "
               "for closed/open quantum and classical ensembles"};
  app.require_subcommand(1);

  const std::vector<std::string> names = {"flow",      "traj", "ensemble", "compress",
                                          "fluxcheck", "nz",   "classical"};
  const std::vector<std::string> blurbs = {
      "emit a flow-field grid",
      "integrate a single trajectory (with optional snapshots)",
      "sample, push forward and summarize a state-space ensemble",
      "compressibility diagnostics (analytic vs central differences)",
      "integral continuity check on a ball region",
      "memory-kernel compressibility over a time grid",
      "classical phase-space trajectory, flow grid and density transport"};

  std::vector<SubcommandArgs> args(names.size());
  for (std::size_t i = 0; i < names.size(); ++i) {
    CLI::App* sub = app.add_subcommand(names[i], blurbs[i]);
    sub->add_option("--config", args[i].config_path, "scenario config file (JSON)")
        ->required();
    sub->add_option("--out-dir", args[i].out_dir, "output directory (default: .)");
    sub->add_option("--seed", args[i].seed, "override the config seed")
        ->each([&args, i](const std::string&) { args[i].seed_given = true; });
  }

  CLI11_PARSE(app, argc, argv);

  std::string subcommand;
  const SubcommandArgs* chosen = nullptr;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (app.got_subcommand(names[i])) {
      subcommand = names[i];
      chosen = &args[i];
      break;
    }
  }

  try {
    liouflow::cli::ScenarioConfig config = liouflow::cli::load_config(chosen->config_path);
    const std::string expected = liouflow::cli::run_kind_for_subcommand(subcommand);
    if (config.run_kind != expected) {
      throw liouflow::cli::ConfigError("subcommand '" + subcommand + "' requires run.kind '" +
                                       expected + "', config has '" + config.run_kind + "'");
    }
    if (chosen->seed_given) {
      config.seed = chosen->seed;
    }
    const liouflow::cli::RunResult result = liouflow::cli::run_scenario(config, chosen->out_dir);
    std::cout << "wrote " << result.files.size() << " file(s); manifest: "
              << result.manifest_path.string() << "\n";
    return 0;
  } catch (const liouflow::cli::ConfigError& err) {
    std::cerr << "config error: " << err.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& err) {
    std::cerr << "config error: " << err.what() << "\n";
    return 1;
  } catch (const std::domain_error& err) {
    std::cerr << "config error: " << err.what() << "\n";
    return 1;
  } catch (const liouflow::NumericalError& err) {
    std::cerr << "numerical failure: " << err.what() << "\n";
    return 2;
  } catch (const std::exception& err) {
    std::cerr << "numerical failure: " << err.what() << "\n";
    return 2;
  }
}
