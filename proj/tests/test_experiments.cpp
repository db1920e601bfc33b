#include <doctest.h>

#include "fairbandit/experiments.hpp"
#include "fairbandit/svg.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace fairbandit;

namespace {

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::filesystem::path fresh_dir(const std::string& name) {
  std::filesystem::path dir = std::filesystem::temp_directory_path() / name;
  std::filesystem::remove_all(dir);
  return dir;
}

ExperimentConfig tiny_ucb_config(std::uint64_t seed) {
  return parse_config_text("experiment=ucb-mistreatment\n",
                           {"T=40", "trials=3", "k=4", "seed=" + std::to_string(seed)});
}

}  // namespace

TEST_SUITE("experiments") {

TEST_CASE("tags cover every runnable experiment") {
  const auto& tags = experiment_tags();
  CHECK(tags.size() == 8);
  for (const std::string& tag : tags) {
    ExperimentConfig config = parse_config_text("experiment=" + tag + "\n");
    CHECK(config.experiment == tag);
    CHECK(config.horizon > 0);
    CHECK(config.trials > 0);
  }
}

TEST_CASE("defaults fill unset keys per experiment") {
  ExperimentConfig config = parse_config_text("experiment=ucb-mistreatment\n");
  CHECK(config.horizon == 10000);
  CHECK(config.trials == 100);
  CHECK(config.k == 10);
  CHECK(config.d == 2);
  CHECK(config.delta == doctest::Approx(0.05));
  CHECK(config.seed == 1);
  CHECK(config.stride == 10);

  ExperimentConfig sweep = parse_config_text("experiment=gap-sweep\n");
  CHECK(sweep.gaps == "0.125,0.25,0.5,1.0");
  CHECK(sweep.noise_scale == doctest::Approx(0.5));

  ExperimentConfig lower = parse_config_text("experiment=lowerbound-posterior\n");
  CHECK(lower.trials == 10000);
  CHECK(lower.eps == doctest::Approx(0.05));
}

TEST_CASE("file values and overrides take precedence in order") {
  std::string text =
      "# reference run\n"
      "experiment = ucb-mistreatment\n"
      "\n"
      "T = 123\n"
      "seed = 9\n";
  ExperimentConfig config = parse_config_text(text, {"seed=11", "k=3"});
  CHECK(config.horizon == 123);   // from the file
  CHECK(config.seed == 11);       // override beats the file
  CHECK(config.k == 3);           // override beats the default
  CHECK(config.trials == 100);    // untouched default
}

TEST_CASE("malformed configurations are rejected by name") {
  CHECK_THROWS_WITH_AS(parse_config_text(""), doctest::Contains("experiment"),
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse_config_text("experiment=no-such-tag\n"),
                       doctest::Contains("no-such-tag"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(
      parse_config_text("experiment=ucb-mistreatment\nbananas=3\n"),
      doctest::Contains("bananas"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse_config_text("experiment=ucb-mistreatment\nT=abc\n"),
                       doctest::Contains("T"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse_config_text("experiment=ucb-mistreatment\nT=0\n"),
                       doctest::Contains("T"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(
      parse_config_text("experiment=ucb-mistreatment\ndelta=1.5\n"),
      doctest::Contains("delta"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(
      parse_config_text("experiment=ucb-mistreatment\ngamma=0.5\n"),
      doctest::Contains("gamma"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(
      parse_config_text("experiment=lowerbound-posterior\neps=0.7\n"),
      doctest::Contains("eps"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(
      parse_config_text("experiment=ucb-mistreatment\nnoise=laplace\n"),
      doctest::Contains("laplace"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse_config_text("experiment=ucb-mistreatment\nT\n"),
                       doctest::Contains("T"), std::invalid_argument);
  // Quota larger than the offer set is a cross-field error.
  CHECK_THROWS_AS(parse_config_text("experiment=ridgefair-regret\nk=3\nm=5\n"),
                  std::invalid_argument);
  CHECK_THROWS_AS(parse_config_file("/nonexistent/run.cfg"), std::runtime_error);
}

TEST_CASE("seed derivation separates and reproduces trial streams") {
  CHECK(derive_seed(1, 0) == derive_seed(1, 0));
  CHECK(derive_seed(1, 0) != derive_seed(1, 1));
  CHECK(derive_seed(1, 0) != derive_seed(2, 0));
  // Nearby master seeds must not produce colliding trial streams.
  for (std::uint64_t master = 0; master < 20; ++master)
    for (int i = 0; i < 20; ++i)
      for (int j = i + 1; j < 20; ++j)
        CHECK(derive_seed(master, i) != derive_seed(master, j));
}

TEST_CASE("runs are reproducible byte for byte") {
  ExperimentConfig config = tiny_ucb_config(17);
  auto dir_a = fresh_dir("fairbandit_test_run_a");
  auto dir_b = fresh_dir("fairbandit_test_run_b");
  run_and_write(config, dir_a.string());
  run_and_write(config, dir_b.string());
  CHECK(slurp(dir_a / "results.csv") == slurp(dir_b / "results.csv"));
  CHECK(slurp(dir_a / "aggregate.csv") == slurp(dir_b / "aggregate.csv"));
  CHECK(!slurp(dir_a / "results.csv").empty());

  // A different seed must actually change the data.
  auto dir_c = fresh_dir("fairbandit_test_run_c");
  run_and_write(tiny_ucb_config(18), dir_c.string());
  CHECK(slurp(dir_a / "results.csv") != slurp(dir_c / "results.csv"));
}

TEST_CASE("worker count obeys the environment cap") {
  ::setenv("FAIRBANDIT_THREADS", "3", 1);
  CHECK(worker_count(100) == 3);
  CHECK(worker_count(2) == 2);  // never more workers than trials
  ::setenv("FAIRBANDIT_THREADS", "banana", 1);
  CHECK_THROWS_AS(worker_count(4), std::invalid_argument);
  ::setenv("FAIRBANDIT_THREADS", "0", 1);
  CHECK_THROWS_AS(worker_count(4), std::invalid_argument);
  ::unsetenv("FAIRBANDIT_THREADS");
  CHECK(worker_count(100) >= 1);
}

TEST_CASE("scheduling does not leak into results") {
  ExperimentConfig config = tiny_ucb_config(19);
  ::setenv("FAIRBANDIT_THREADS", "1", 1);
  auto dir_serial = fresh_dir("fairbandit_test_serial");
  run_and_write(config, dir_serial.string());
  ::setenv("FAIRBANDIT_THREADS", "2", 1);
  auto dir_pool = fresh_dir("fairbandit_test_pool");
  run_and_write(config, dir_pool.string());
  ::unsetenv("FAIRBANDIT_THREADS");
  CHECK(slurp(dir_serial / "results.csv") == slurp(dir_pool / "results.csv"));
  CHECK(slurp(dir_serial / "aggregate.csv") == slurp(dir_pool / "aggregate.csv"));
}

TEST_CASE("result tables carry the documented shape") {
  ExperimentConfig config = tiny_ucb_config(20);
  config.stride = 10;
  RunResult result = run_experiment(config);
  REQUIRE(result.trial_series.count("cum_mistreatment") == 1);
  const auto& per_trial = result.trial_series.at("cum_mistreatment");
  REQUIRE(per_trial.size() == 3);
  for (const auto& series : per_trial) CHECK(series.size() == 40);
  // Mistreatment counts accumulate.
  for (const auto& series : per_trial)
    for (std::size_t i = 1; i < series.size(); ++i)
      CHECK(series[i] >= series[i - 1]);

  const auto& aggregate = result.aggregates.at("cum_mistreatment");
  REQUIRE(aggregate.mean.size() == 40);
  REQUIRE(aggregate.std_error.size() == 40);
  double by_hand = (per_trial[0][39] + per_trial[1][39] + per_trial[2][39]) / 3.0;
  CHECK(aggregate.mean[39] == doctest::Approx(by_hand));

  // Strided per-trial rows keep rounds 1, 11, 21, 31 and the final round.
  std::vector<ResultRow> rows = per_trial_rows(config, result);
  long kept_for_trial0 = 0;
  bool saw_final = false;
  for (const ResultRow& row : rows) {
    CHECK(row.experiment == "ucb-mistreatment");
    if (row.trial == 0 && row.metric == "cum_mistreatment") {
      ++kept_for_trial0;
      if (row.t == 40) saw_final = true;
      CHECK((row.t % 10 == 1 || row.t == 40));
    }
  }
  CHECK(kept_for_trial0 == 5);
  CHECK(saw_final);

  std::vector<ResultRow> agg_rows = aggregate_rows(config, result);
  long mean_rows = 0, se_rows = 0;
  for (const ResultRow& row : agg_rows) {
    CHECK(row.trial == -1);
    if (row.metric == "cum_mistreatment.mean") ++mean_rows;
    if (row.metric == "cum_mistreatment.stderr") ++se_rows;
  }
  CHECK(mean_rows == 40);
  CHECK(se_rows == 40);
}

TEST_CASE("csv round trip preserves rows") {
  std::vector<ResultRow> rows{{"demo", 0, 1, "metric_a", 1.5},
                              {"demo", -1, 2, "metric_b.mean", -0.25},
                              {"demo", 2, 40, "metric_a", 3.0}};
  auto dir = fresh_dir("fairbandit_test_csv");
  std::filesystem::create_directories(dir);
  std::string path = (dir / "rows.csv").string();
  write_csv(rows, path);
  std::string text = slurp(path);
  CHECK(text.rfind("experiment,trial,t,metric,value\n", 0) == 0);
  std::vector<ResultRow> loaded = read_csv(path);
  REQUIRE(loaded.size() == rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(loaded[i].experiment == rows[i].experiment);
    CHECK(loaded[i].trial == rows[i].trial);
    CHECK(loaded[i].t == rows[i].t);
    CHECK(loaded[i].metric == rows[i].metric);
    CHECK(loaded[i].value == doctest::Approx(rows[i].value));
  }
  CHECK_THROWS_AS(read_csv((dir / "absent.csv").string()), std::runtime_error);
  std::ofstream bad(dir / "bad.csv");
  bad << "not,the,right,header,at_all\n";
  bad.close();
  CHECK_THROWS_AS(read_csv((dir / "bad.csv").string()), std::runtime_error);
}

TEST_CASE("plots render polylines for existing metrics only") {
  ExperimentConfig config = tiny_ucb_config(21);
  RunResult result = run_experiment(config);
  std::vector<ResultRow> rows = aggregate_rows(config, result);
  std::string svg = render_plot(rows, "cum_mistreatment.mean");
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("<polyline") != std::string::npos);
  CHECK(svg.find("cum_mistreatment.mean") != std::string::npos);

  std::string two = render_plot(rows, "cum_mistreatment.mean,cum_mistreatment.stderr");
  CHECK(two.find("cum_mistreatment.stderr") != std::string::npos);

  CHECK_THROWS_WITH_AS(render_plot(rows, "no_such_metric"),
                       doctest::Contains("cum_mistreatment.mean"),
                       std::invalid_argument);
  CHECK_THROWS_AS(render_plot({}, "anything"), std::invalid_argument);
}

TEST_CASE("per-trial fallback plotting works without aggregates") {
  ExperimentConfig config = tiny_ucb_config(22);
  RunResult result = run_experiment(config);
  std::vector<ResultRow> rows = per_trial_rows(config, result);
  std::string svg = render_plot(rows, "cum_mistreatment");
  CHECK(svg.find("<polyline") != std::string::npos);
}

TEST_CASE("a disparity run reports population-level rates") {
  ExperimentConfig config = parse_config_text(
      "experiment=disparity\n", {"trials=20", "T=10", "seed=5"});
  RunResult result = run_experiment(config);
  bool found_overall = false;
  for (const ResultRow& row : result.extra) {
    if (row.metric == "overall_mistreat_prob_minority" && row.trial == -1) {
      found_overall = true;
      CHECK(row.value >= 0.0);
      CHECK(row.value <= 1.0);
    }
  }
  CHECK(found_overall);
}

TEST_CASE("a tiny gap-sweep run emits per-gap series and medians") {
  ExperimentConfig config = parse_config_text(
      "experiment=gap-sweep\n",
      {"trials=3", "T=300", "seed=5", "gaps=0.5,1.0", "stride=50"});
  RunResult result = run_experiment(config);
  CHECK(result.trial_series.count("cum_regret_gap0.5") == 1);
  CHECK(result.trial_series.count("cum_regret_gap1") == 1);
  int medians = 0;
  for (const ResultRow& row : result.extra)
    if (row.metric.rfind("median_final_regret_gap", 0) == 0) ++medians;
  CHECK(medians == 2);
  CHECK_THROWS_AS(
      run_experiment(parse_config_text("experiment=gap-sweep\n",
                                       {"trials=1", "T=10", "gaps=2.0"})),
      std::invalid_argument);
}

TEST_CASE("polytope files feed the gap experiment") {
  auto dir = fresh_dir("fairbandit_test_poly");
  std::filesystem::create_directories(dir);
  std::string path = (dir / "triangle.txt").string();
  {
    std::ofstream out(path);
    out << "3 2\n-1 0 0\n0 -1 0\n1 1 1\n";
  }
  ExperimentConfig config = parse_config_text(
      "experiment=fairgap-regret\n",
      {"trials=2", "T=400", "seed=3", "polytope=" + path, "beta=1,0"});
  RunResult result = run_experiment(config);
  CHECK(result.trial_series.count("cum_regret") == 1);
  REQUIRE(result.trial_series.at("cum_regret").size() == 2);
  CHECK(result.trial_series.at("cum_regret")[0].size() == 400);

  ExperimentConfig missing = config;
  missing.polytope_file = (dir / "absent.txt").string();
  CHECK_THROWS(run_experiment(missing));
}

}  // TEST_SUITE
