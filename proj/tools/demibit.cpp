#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "demibit/cli.hpp"
#include "demibit/errors.hpp"

namespace cli = demibit::cli;

int main(int argc, char** argv) {
  CLI::App app{"demibit: exact experiments with demi-bits, super-bits and their reductions"};
  app.require_subcommand(1);

  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> cap;
  std::string format = "report";
  app.add_option("--seed", seed, "Override the config seed");
  app.add_option("--cap", cap, "Largest number of bits any exhaustive enumeration may cover")
      ->check(CLI::Range(1, 40));
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"report", "csv"}));

  auto* run = app.add_subcommand("run", "Run an experiment config");
  std::string config_path;
  run->add_option("config", config_path, "Config file")->required();

  auto* self = app.add_subcommand("selftest", "Run the built-in invariant suite");
  bool inject = false;
  self->add_flag("--inject-fault", inject, "Swap in a mis-wired reduction; the suite must then fail");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::kExitInput;
  }

  if (self->parsed()) {
    const auto r = cli::selftest({inject});
    std::cout << r.table;
    return r.exit_code;
  }

  cli::ExperimentConfig cfg;
  try {
    cfg = cli::load_config(config_path);
  } catch (const demibit::Error& e) {
    std::cerr << "demibit: " << config_path << ": " << e.what() << "\n";
    return cli::kExitInput;
  }
  cli::RunOptions opts;
  opts.format = format == "csv" ? cli::OutputFormat::Csv : cli::OutputFormat::Report;
  opts.seed = seed;
  opts.cap = cap;
  const auto result = cli::run(cfg, opts);
  if (cfg.output) {
    const auto path = cfg.base_dir / *cfg.output;
    std::ofstream out(path);
    if (!out) {
      std::cerr << "demibit: cannot write " << path << "\n";
      return cli::kExitInput;
    }
    out << result.output;
    std::cerr << "demibit: report written to " << path << " (exit " << result.exit_code << ")\n";
  } else {
    std::cout << result.output;
  }
  return result.exit_code;
}
