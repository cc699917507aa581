#include "CLI11.hpp"
#include "ergotor/version.hpp"
#include "runner.hpp"

namespace ergotor::cli {

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Ergodic averages, equidistribution and Monte Carlo checks for linear "
               "flows on the infinite torus",
               "ergotor"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::string format;
  std::uint64_t seed = 0;

  auto* run = app.add_subcommand("run", "Run an experiment and write its reports");
  run->add_option("config", config_path, "Experiment config (JSON)")->required();
  auto* out_opt = run->add_option("--out", out_dir, "Output directory (overrides output.dir)");
  auto* format_opt = run->add_option("--format", format, "Report format")
                         ->check(CLI::IsMember({"csv", "json", "both"}));
  auto* seed_opt = run->add_option("--seed", seed, "Seed (overrides the config seed)");

  auto* validate = app.add_subcommand("validate", "Check a config without running it");
  validate->add_option("config", config_path, "Experiment config (JSON)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  if (*validate) return validate_command(config_path, out, err);
  RunOptions options;
  if (*out_opt) options.out_dir = out_dir;
  if (*format_opt) options.format = format;
  if (*seed_opt) options.seed = seed;
  return run_command(config_path, options, out, err);
}

}  // namespace ergotor::cli
