#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "nadd/cli.hpp"

namespace {

nadd::Json load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw nadd::ConfigError("cannot read config file '" + path + "'");
  nadd::Json config;
  try {
    config = nadd::Json::parse(is);
  } catch (const std::exception& e) {
    throw nadd::ConfigError("config '" + path + "' is not valid JSON: " + e.what());
  }
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nadd: thermodynamic formalism for almost and asymptotically additive "
               "potential sequences on subshifts of finite type"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  double tol = 0.0;
  std::uint64_t cap = 0;
  bool have_tol = false, have_cap = false;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "analysis config (JSON)")->required();
    cmd->add_option("--out", out_dir, "output directory for report and CSV files");
    cmd->add_option("--tol", tol, "override the comparison tolerance")
        ->each([&](const std::string&) { have_tol = true; });
    cmd->add_option("--cap", cap, "override the enumeration cap")
        ->each([&](const std::string&) { have_cap = true; });
  };

  for (const std::string& name : nadd::cli::command_names()) add_common(app.add_subcommand(name));
  auto* validate = app.add_subcommand("validate", "check a config without executing it");
  validate->add_option("--config", config_path, "analysis config (JSON)")->required();
  std::string validate_command = "pressure";
  validate->add_option("--command", validate_command, "command to validate against");

  CLI11_PARSE(app, argc, argv);
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    const nadd::Json config = load_config(config_path);
    if (command == "validate") {
      auto diagnostics = nadd::cli::validate_config(config, validate_command);
      for (const auto& d : diagnostics) std::cout << d.path << ": " << d.message << "\n";
      return diagnostics.empty() ? nadd::cli::kExitOk : nadd::cli::kExitError;
    }
    nadd::cli::RunOptions options;
    options.out_dir = out_dir;
    if (have_tol) options.tol = tol;
    if (have_cap) options.cap = cap;
    const nadd::cli::ReportDocument doc = nadd::cli::run(config, command, options);
    std::cout << doc.doc.dump(2) << "\n";
    return doc.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return nadd::cli::kExitError;
  }
}
