#include <charconv>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "ismpbt/suites.hpp"

namespace {

// ISMPBT_SEED must be a plain decimal uint64; anything else is an error, not
// a silent fallback.
std::optional<std::uint64_t> seed_from_env(bool& malformed) {
  malformed = false;
  const char* raw = std::getenv("ISMPBT_SEED");
  if (raw == nullptr) return std::nullopt;
  const std::string text(raw);
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    malformed = true;
    return std::nullopt;
  }
  return value;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Property-based testing for indexed state machines"};
  app.require_subcommand(1);

  std::string run_suite;
  std::string run_prop;
  std::uint64_t run_seed = ismpbt::kDefaultSeed;
  int run_tests = 100;
  bool run_json = false;
  bool run_allow_exhaust = false;
  CLI::App* run = app.add_subcommand("run", "Run registered properties");
  run->add_option("--suite", run_suite, "Suite name (default: every suite)");
  run->add_option("--prop", run_prop, "Property name (default: every property in scope)");
  CLI::Option* seed_opt = run->add_option("--seed", run_seed, "Root RNG seed");
  run->add_option("--tests", run_tests, "Number of test cases")
      ->check(CLI::PositiveNumber);
  run->add_flag("--json", run_json, "Emit a JSON report instead of text");
  run->add_flag("--allow-exhaust", run_allow_exhaust,
                "Exhausted properties count as success for the exit code");

  std::string oracle_suite;
  std::string oracle_prop;
  int oracle_depth = 0;
  CLI::App* oracle =
      app.add_subcommand("oracle", "Print the exact probability a property holds");
  oracle->add_option("--suite", oracle_suite, "Suite name")->required();
  oracle->add_option("--prop", oracle_prop, "Property name")->required();
  CLI::Option* depth_opt =
      oracle->add_option("--depth", oracle_depth,
                         "Trace depth (default: the property's bound)")
          ->check(CLI::NonNegativeNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (run->parsed()) {
      ismpbt::RunOptions opts;
      opts.suite = run_suite;
      opts.prop = run_prop;
      opts.tests = run_tests;
      opts.json = run_json;
      opts.allow_exhaust = run_allow_exhaust;
      if (seed_opt->count() > 0) {
        opts.seed = run_seed;
      } else {
        bool malformed = false;
        if (const auto env_seed = seed_from_env(malformed)) {
          opts.seed = *env_seed;
        } else if (malformed) {
          std::cerr << "ISMPBT_SEED is not a decimal 64-bit seed\n";
          return 2;
        }
      }
      return ismpbt::cmd_run(std::cout, opts);
    }
    ismpbt::OracleOptions opts;
    opts.suite = oracle_suite;
    opts.prop = oracle_prop;
    if (depth_opt->count() > 0) opts.depth = oracle_depth;
    return ismpbt::cmd_oracle(std::cout, opts);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
