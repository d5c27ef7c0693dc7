#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "dimlab/error.hpp"
#include "dimlab/run.hpp"

int main(int argc, char** argv) {
  CLI::App app{"dimlab: dimension estimates for point clouds"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "run the tasks of a JSON config");
  std::string config_path, out_dir;
  std::uint64_t seed = 0;
  bool verbose = false;
  run->add_option("--config", config_path, "config file")->required()->check(CLI::ExistingFile);
  auto* out_opt = run->add_option("--out", out_dir, "output directory (overrides the config)");
  auto* seed_opt = run->add_option("--seed", seed, "seed (overrides the config)");
  run->add_flag("--verbose,-v", verbose, "progress on stderr");

  auto* desc = app.add_subcommand("describe", "closed forms for a canonical example");
  std::string example;
  desc->add_option("example", example, "seq_times_segment, f_p(p), f_p_product(p), segment, square")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // usage errors are errors like any other: exit 1, help stays 0
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*desc) {
      std::cout << dimlab::describe(example);
      return 0;
    }
    nlohmann::json j;
    {
      std::ifstream in(config_path);
      try {
        in >> j;
      } catch (const nlohmann::json::exception& e) {
        throw dimlab::Error(dimlab::ErrorKind::invalid_config, std::string("config is not JSON: ") + e.what());
      }
    }
    auto cfg = dimlab::RunConfig::parse(j);
    if (*out_opt) cfg.output_dir = out_dir;
    if (*seed_opt) cfg.seed = seed;
    const auto res = dimlab::run(cfg, verbose ? &std::cerr : nullptr);
    if (res.summary.contains("error")) std::cerr << "dimlab: " << res.summary["error"].get<std::string>() << "\n";
    if (verbose)
      for (const auto& f : res.files) std::cerr << "  wrote " << f << "\n";
    return res.exit_code;
  } catch (const dimlab::Error& e) {
    std::cerr << "dimlab: " << e.what() << "\n";
    return 1;
  }
}
