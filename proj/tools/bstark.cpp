#include "bstark/cli.hpp"

#include "CLI11.hpp"

#include <iostream>
#include <map>
#include <optional>

int main(int argc, char** argv) {
  CLI::App app{"Brumer-Stark units over real quadratic fields"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::map<std::string, std::string> overrides;
  app.add_option("-c,--config", config_path, "key=value configuration file");
  for (const char* key : {"d", "conductor", "p", "ell", "precision", "workers", "cache_dir", "out"}) {
    std::string k = key;
    app.add_option_function<std::string>("--" + k, [k, &overrides](const std::string& v) { overrides[k] = v; },
                                         "override " + k);
  }
  app.add_subcommand("theta", "Stickelberger element and its invariant checks");
  app.add_subcommand("unit", "analytic units, reconstructed polynomial and verification report");
  app.add_subcommand("sku", "Sinnott-Kurihara ideal with integrality certificates");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : bstark::kExitConfig;
  }

  bstark::RunConfig rc;
  try {
    if (!config_path.empty()) rc = bstark::read_config_file(config_path);
    for (const auto& [k, v] : overrides) bstark::apply_config_key(rc, k, v);
  } catch (const bstark::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return bstark::kExitConfig;
  }
  const std::string command = app.get_subcommands().front()->get_name();
  return bstark::run_command(command, rc, std::cout, std::cerr);
}
