#include <CLI11.hpp>
#include <iostream>

#include "ptdyn/experiments.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_dir = "out";
  int threads = 0;
  bool no_cache = false;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "configuration file")->required();
  cmd->add_option("--out", args.out_dir, "output directory");
  cmd->add_option("--threads", args.threads,
                  "work-pool width for independent runs (0 = hardware)");
  cmd->add_flag("--no-cache", args.no_cache, "disable the reference cache");
}

int dispatch(const std::string& name, const CommonArgs& args) {
  ptdyn::ExperimentConfig cfg = ptdyn::parse_config_file(args.config_path);
  ptdyn::RunOptions opt;
  opt.out_dir = args.out_dir;
  opt.threads = args.threads;
  opt.use_cache = !args.no_cache;
  opt.log = [](const std::string& msg) { std::cout << msg << "\n" << std::flush; };
  if (name == "run") ptdyn::cmd_run(cfg, opt);
  else if (name == "sweep-h") ptdyn::cmd_sweep_h(cfg, opt);
  else if (name == "sweep-ne") ptdyn::cmd_sweep_ne(cfg, opt);
  else if (name == "dipole") ptdyn::cmd_dipole(cfg, opt);
  else if (name == "bounds") ptdyn::cmd_bounds(cfg, opt);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"driven-lattice mixed-state propagation experiments"};
  app.require_subcommand(1);

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"run", "propagate one trajectory and record conservation diagnostics"},
      {"sweep-h", "relative errors and convergence order over a step-size list"},
      {"sweep-ne", "errors, bound terms, and histograms over an electron-count list"},
      {"dipole", "dipole traces of coarse PT/SD runs against a fine reference"},
      {"bounds", "commutator-bound terms along one PT trajectory"}};

  std::map<std::string, CommonArgs> args;
  for (const auto& [name, desc] : commands) add_common(app.add_subcommand(name, desc), args[name]);

  CLI11_PARSE(app, argc, argv);

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    return dispatch(name, args[name]);
  } catch (const ptdyn::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
