#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "heatbasis/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Caloric bases, parabolic potentials and double orthogonality experiments"};
  app.require_subcommand(1);
  std::string config;
  std::string out = ".";
  for (const auto& [cmd, name] : heatbasis::cli::command_names()) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config, "JSON experiment config")->required();
    sub->add_option("--out", out, "output directory");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << heatbasis::cli::error_line("invalid-config", e.what()) << "\n";
    return 2;
  }
  const std::string command = app.get_subcommands().front()->get_name();
  return heatbasis::cli::execute(command, config, out, std::cerr);
}
