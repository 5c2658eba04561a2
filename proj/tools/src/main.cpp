#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "hvlab/checkpoint.hpp"
#include "hvlab/config.hpp"
#include "hvlab/scenario.hpp"

namespace {

struct Args {
  std::string scenario;
  std::string config_path;
  std::string out_dir = "out";
  int workers = 0;
};

int execute(const Args& a) {
  try {
    hvl::ConfigFile file = hvl::ConfigFile::load(a.config_path);
    hvl::apply_env_overrides(file);
    hvl::RunConfig cfg = hvl::RunConfig::from_file(file);
    if (a.workers > 0) cfg.workers = a.workers;
    return hvl::run_scenario(a.scenario, cfg, a.out_dir, std::cerr);
  } catch (const hvl::ConfigError& e) {
    std::cerr << hvl::error_line(2, "config", e.what()) << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << hvl::error_line(3, "numeric", e.what()) << '\n';
    return 3;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hvlab: Hartree / Vlasov comparison laboratory"};
  app.require_subcommand(1);

  Args run_args;
  auto* run = app.add_subcommand("run", "run a named scenario");
  run->add_option("--scenario", run_args.scenario, "scenario id")->required();
  run->add_option("--config", run_args.config_path, "config file")->required();
  run->add_option("--out", run_args.out_dir, "output directory");
  run->add_option("--workers", run_args.workers, "sweep worker threads");

  Args fdll_args;
  fdll_args.scenario = "fdll-verify";
  auto* fdll = app.add_subcommand("fdll-verify", "alias for run --scenario fdll-verify");
  fdll->add_option("--config", fdll_args.config_path, "config file")->required();
  fdll->add_option("--out", fdll_args.out_dir, "output directory");

  CLI11_PARSE(app, argc, argv);

  if (run->parsed()) return execute(run_args);
  return execute(fdll_args);
}
