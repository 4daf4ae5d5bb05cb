#include <iostream>

#include <CLI11.hpp>

#include "l1quad/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Quadrotor geometric control with L1 adaptive augmentation"};
  app.require_subcommand(1);
  l1quad::RunManifest manifest;
  for (const char* name : {"simulate", "certify", "sweep", "estimate-check"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", manifest.config_path, "configuration file");
    sub->add_option("--out", manifest.out_dir, "output directory");
    sub->add_option("--set", manifest.overrides, "override section.key=value")->take_all();
    sub->add_flag("--quiet", manifest.quiet, "suppress stdout report");
    sub->callback([&manifest, name] { manifest.subcommand = name; });
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : l1quad::kExitUsage;
  }
  return l1quad::run_command(manifest, std::cout, std::cerr);
}
