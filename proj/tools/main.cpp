#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "eitcorr/cli.hpp"

int main(int argc, char** argv) {
  namespace cli = eitcorr::cli;
  CLI::App app{"EIT intensity-correlation simulator"};
  app.set_version_flag("--version", std::string(cli::kToolVersion));

  cli::RunRequest req;
  std::string out_dir = ".";
  std::uint64_t seed = 0;
  std::string timestamp;

  app.add_option("subcommand", req.subcommand, "eit-sweep | waveforms | correlate-sweep | analyze | phase-lock")
      ->required()
      ->check(CLI::IsMember(cli::subcommands()));
  app.add_option("--config", req.config_path, "config file (defaults when omitted)")
      ->check(CLI::ExistingFile);
  auto* seed_opt = app.add_option("--seed", seed, "run seed, overrides the config");
  app.add_option("--out", out_dir, "output directory")->capture_default_str();
  app.add_option("--threads", req.threads, "worker threads for sweeps")
      ->check(CLI::Range(1u, 1024u))
      ->capture_default_str();
  auto* ts_opt = app.add_option("--timestamp", timestamp, "manifest timestamp (default: now, UTC)");
  app.add_option("--input", req.input, "analyze: waveform CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::kConfigError;
  }
  req.out_dir = out_dir;
  if (*seed_opt) req.seed = seed;
  if (*ts_opt) req.timestamp = timestamp;
  return cli::run(req, std::cerr);
}
