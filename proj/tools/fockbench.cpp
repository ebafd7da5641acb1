// fockbench: verify Fock-space identities for a configured field and embedding.

#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "fockbench/cli/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Numerical verification of Fock-space spectral identities"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run the suites described by a JSON config");
  std::string config;
  std::string suite;
  std::uint64_t seed = 0;
  std::string out;
  run->add_option("config", config, "Path to the config JSON")->required();
  auto* suite_opt = run->add_option("--suite", suite, "Run a single suite")
                        ->check(CLI::IsMember({"validate", "moments", "charfun", "transport", "chaos",
                                               "eigencheck", "all"}));
  auto* seed_opt = run->add_option("--seed", seed, "Override the Monte Carlo seed");
  auto* out_opt = run->add_option("--out", out, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  return fockbench::cli::run_command(
      config, *suite_opt ? std::optional<std::string>(suite) : std::nullopt,
      *seed_opt ? std::optional<std::uint64_t>(seed) : std::nullopt,
      *out_opt ? std::optional<std::filesystem::path>(out) : std::nullopt, std::cout);
}
