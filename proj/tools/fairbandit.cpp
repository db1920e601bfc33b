#include "fairbandit/experiments.hpp"
#include "fairbandit/svg.hpp"

#include <CLI11.hpp>

#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{
      "fairbandit: simulation harness for meritocratically fair linear "
      "bandit selection"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  std::vector<std::string> overrides;
  CLI::App* run = app.add_subcommand("run", "Run a configured experiment");
  run->add_option("--config", config_path, "key=value config file")->required();
  run->add_option("--set", overrides,
                  "override a config key, e.g. --set trials=10 (repeatable)");
  run->add_option("--out", out_dir, "output directory for results.csv and aggregate.csv")
      ->required();

  std::string in_csv, metric, out_svg;
  CLI::App* plot = app.add_subcommand("plot", "Render a metric from a results CSV");
  plot->add_option("--in", in_csv, "input CSV produced by run")->required();
  plot->add_option("--metric", metric,
                   "metric name, or comma-separated list for multiple lines")
      ->required();
  plot->add_option("--out", out_svg, "output SVG path")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      fairbandit::ExperimentConfig cfg =
          fairbandit::parse_config_file(config_path, overrides);
      std::cout << "experiment " << cfg.experiment << ": " << cfg.trials
                << " trials, T=" << cfg.horizon << ", seed=" << cfg.seed
                << ", workers=" << fairbandit::worker_count(cfg.trials) << "\n";
      fairbandit::run_and_write(cfg, out_dir);
      std::cout << "wrote " << out_dir << "/results.csv and " << out_dir
                << "/aggregate.csv\n";
    } else if (plot->parsed()) {
      std::vector<fairbandit::ResultRow> rows = fairbandit::read_csv(in_csv);
      std::string svg = fairbandit::render_plot(rows, metric);
      std::filesystem::path path(out_svg);
      if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
      std::ofstream out(out_svg);
      if (!out) throw std::runtime_error("cannot open " + out_svg);
      out << svg;
      std::cout << "wrote " << out_svg << "\n";
    }
  } catch (const std::exception& error) {
    std::cerr << "error: " << error.what() << "\n";
    return 1;
  }
  return 0;
}
