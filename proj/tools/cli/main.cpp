#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "commands.hpp"

namespace {

struct Options {
  std::string config_path;
  std::string preset;
  std::string out = ".";
  std::string s, h, tol;
};

mcms::cli::RunConfig load(const Options& o) {
  using mcms::cli::ConfigError;
  if (o.config_path.empty() && o.preset.empty())
    throw ConfigError("no configuration: pass --config or --preset", 0);
  mcms::cli::RunConfig c;
  if (!o.preset.empty()) c = mcms::cli::preset(o.preset);
  if (!o.config_path.empty()) {
    std::ifstream is(o.config_path, std::ios::binary);
    if (!is) throw ConfigError("cannot read " + o.config_path, 0);
    std::ostringstream ss;
    ss << is.rdbuf();
    try {
      c = mcms::cli::parse_config(ss.str(), c);
    } catch (const ConfigError& e) {
      throw ConfigError(o.config_path + ":" + e.what(), e.line());
    }
  }
  // command-line overrides win over file and preset
  for (auto [key, value] : {std::pair{"s", &o.s}, {"h", &o.h}, {"tol", &o.tol}}) {
    if (value->empty()) continue;
    try {
      mcms::cli::apply_setting(c, key, *value);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("--") + key + ": " + e.what(), 0);
    }
  }
  c.validate();
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-component model sets and their invariant densities"};
  app.require_subcommand(1);
  app.set_help_flag("--help", "Print this help message and exit");
  Options opts;

  using Command = mcms::cli::CommandResult (*)(const mcms::cli::RunConfig&);
  const std::pair<const char*, Command> commands[] = {
      {"windows", &mcms::cli::cmd_windows},
      {"points", &mcms::cli::cmd_points},
      {"nu", &mcms::cli::cmd_nu},
      {"solve", &mcms::cli::cmd_solve},
      {"verify", &mcms::cli::cmd_verify},
  };
  const char* help[] = {
      "transition-window table and area matrix",
      "point list of every component as CSV",
      "weight matrix and Perron-Frobenius pair",
      "invariant densities on the windows",
      "physical-side checks, nonzero exit on any FAIL",
  };
  Command chosen = nullptr;
  for (std::size_t k = 0; k < std::size(commands); ++k) {
    CLI::App* sub = app.add_subcommand(commands[k].first, help[k]);
    sub->set_help_flag("--help", "Print this help message and exit");
    sub->add_option("--config", opts.config_path, "key = value config file");
    sub->add_option("--preset", opts.preset, "penrose-example1 | penrose-example2");
    sub->add_option("--out", opts.out, "output directory");
    sub->add_option("--s", opts.s, "physical radius");
    sub->add_option("--h", opts.h, "grid spacing (a/b allowed)");
    sub->add_option("--tol", opts.tol, "fixed-point tolerance");
    sub->callback([&chosen, cmd = commands[k].second] { chosen = cmd; });
  }
  CLI11_PARSE(app, argc, argv);

  try {
    const mcms::cli::RunConfig config = load(opts);
    const mcms::cli::CommandResult result = chosen(config);
    mcms::cli::write_artifacts(result, config, opts.out);
    std::cout << result.console;
    return result.exit_code;
  } catch (const mcms::cli::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
