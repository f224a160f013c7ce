#include <iostream>

#include <CLI11.hpp>

#include "arp/errors.hpp"
#include "arp/experiment.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Adaptive regularization experiments"};
  app.require_subcommand(1);

  std::string config_path;
  std::string run_out = "out";
  auto* run = app.add_subcommand("run", "Run one experiment config");
  run->add_option("config", config_path, "Path to a key = value config file")->required();
  run->add_option("--out", run_out, "Output directory");

  std::string figure;
  std::string rep_out = "out";
  bool serial = false;
  auto* rep = app.add_subcommand("reproduce", "Regenerate a canned figure or example");
  rep->add_option("figure", figure, "fig-top, fig-bottom, example-2-1 or sigma-star")->required();
  rep->add_option("--out", rep_out, "Output directory");
  rep->add_flag("--serial", serial, "Run the experiments one after another");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (run->parsed()) return arp::cmd_run(config_path, run_out, std::cerr);
    return arp::cmd_reproduce(figure, rep_out, std::cerr, !serial);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
