#include <iostream>

#include <CLI11.hpp>

#include "commutant/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Certify commuting convolution/differential operator pairs"};
  std::string command, config_path, out_dir;
  bool dump = false, quiet = false;
  std::int64_t seed = -1;
  app.add_option("command", command, "pair | verify | commutator | spectrum | normality | sweep")
      ->required()
      ->check(CLI::IsMember(commutant::cli_commands()));
  app.add_option("--config", config_path, "JSON run configuration")->required();
  app.add_option("--out", out_dir, "output directory (overrides output_path)");
  app.add_option("--seed", seed, "sweep seed (overrides the config)")->check(CLI::NonNegativeNumber);
  app.add_flag("--dump", dump, "write K.csv and L.csv");
  app.add_flag("--quiet", quiet, "suppress progress output");
  CLI11_PARSE(app, argc, argv);

  try {
    commutant::RunConfig cfg = commutant::load_config(config_path);
    cfg.command = command;
    if (!out_dir.empty()) cfg.output_path = out_dir;
    if (seed >= 0) cfg.seed = static_cast<std::uint64_t>(seed);
    cfg.dump = dump;
    cfg.quiet = quiet;
    const commutant::RunResult res = commutant::run(cfg);
    if (!quiet) {
      for (const auto& c : res.checks)
        std::cout << (c.pass ? "ok   " : "FAIL ") << c.name << " = " << commutant::format_number(c.value)
                  << " (tol " << commutant::format_number(c.tolerance) << ")\n";
      std::cout << "reports written to " << cfg.output_path << '\n';
    }
    return res.exit_status;
  } catch (const commutant::Error& e) {
    std::cerr << "commutant-lab: " << command << ": " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "commutant-lab: " << command << ": unexpected error: " << e.what() << '\n';
    return 3;
  }
}
