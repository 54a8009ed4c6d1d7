#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "risrsma/experiment.hpp"

namespace {

std::vector<std::string> split_commas(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream ss(text);
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"RIS-aided rate-splitting simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::string schemes;
  std::vector<std::string> archs;
  std::uint64_t seed = 0;
  int mc_runs = 0;
  std::string out_path = "results.csv";
  auto* run = app.add_subcommand("run", "Run the rate-region experiment of a config");
  run->add_option("--config", config_path, "JSON config")->required();
  run->add_option("--schemes", schemes, "Comma-separated subset of rs1,sdma,noma,hrs");
  run->add_option("--arch", archs, "single | group:<sizes> | fully | none (repeatable)");
  auto* seed_opt = run->add_option("--seed", seed, "Master seed");
  auto* runs_opt = run->add_option("--mc-runs", mc_runs, "Monte Carlo channel realizations");
  run->add_option("--out", out_path, "Output CSV");

  std::string sum_in;
  std::string sum_out = "summary.csv";
  auto* summarize = app.add_subcommand("summarize", "Ensemble-average a results CSV into frontiers");
  summarize->add_option("--in", sum_in, "Results CSV")->required();
  summarize->add_option("--out", sum_out, "Summary CSV");

  std::string check_path;
  auto* check = app.add_subcommand("validate-config", "Load and validate a config");
  check->add_option("--config", check_path, "JSON config")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*check) {
      const auto cfg = risrsma::load_config(check_path);
      std::cout << "ok: " << (cfg.name.empty() ? check_path : cfg.name) << '\n';
      return 0;
    }
    if (*summarize) {
      risrsma::summarize_file(sum_in, sum_out);
      return 0;
    }
    auto cfg = risrsma::load_config(config_path);
    if (!schemes.empty()) {
      cfg.schemes.clear();
      for (const auto& s : split_commas(schemes)) {
        cfg.schemes.push_back(risrsma::scheme_from_name(s, cfg.groups, cfg.dims.n_users));
      }
    }
    if (!archs.empty()) {
      cfg.archs.clear();
      for (const auto& a : archs) cfg.archs.push_back(risrsma::parse_arch(a, cfg.dims.n_elements));
    }
    if (*seed_opt) cfg.seed = seed;
    if (*runs_opt) cfg.mc_runs = mc_runs;
    cfg.validate();
    risrsma::run_experiment(cfg, out_path);
    return 0;
  } catch (const risrsma::ConfigError& e) {
    std::cerr << "invalid config: " << e.what() << '\n';
    return 1;
  } catch (const risrsma::SchemaError& e) {
    std::cerr << "schema error: " << e.what() << '\n';
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid argument: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
