#ifndef FAIRBANDIT_EXPERIMENTS_HPP
#define FAIRBANDIT_EXPERIMENTS_HPP

#include "fairbandit/types.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace fairbandit {

/**
 * Flat configuration for one experiment run. Built from a key=value file
 * plus command-line overrides; every experiment tag fills unset keys with
 * its published defaults, so an empty file with experiment=<tag> reproduces
 * the reference setup.
 */
struct ExperimentConfig {
  std::string experiment;
  long horizon = 0;      // T
  int trials = 0;        // N
  int k = 0;             // contexts offered per round
  int d = 0;             // context dimension
  int m = 1;             // quota of the exactly-m variant
  double delta = 0.05;
  double gamma = 1.0;
  std::string noise = "gaussian";  // gaussian | uniform | none
  double noise_scale = 1.0;        // R
  std::uint64_t seed = 1;
  double p = 0.9;                // disparity majority probability
  double eps = 0.05;             // posterior-tracker prior halfwidth
  double decay_exponent = 1.0;   // c
  int burn_in = -1;
  double fairness_epsilon = 0.0; // approximate-fairness epsilon
  std::string gaps = "0.125,0.25,0.5,1.0";
  std::string beta;              // comma-separated; empty = experiment default
  int circle_n = 360;
  std::string polytope_file;     // overrides the built-in box instance
  int stride = 1;                // CSV thinning for long series
};

// Parses "key=value" lines ('#' comments, blank lines allowed), applies the
// experiment's defaults for unset keys, validates. Throws
// std::invalid_argument with a message naming the offending key.
ExperimentConfig parse_config_text(const std::string& text,
                                   const std::vector<std::string>& overrides = {});
ExperimentConfig parse_config_file(const std::string& path,
                                   const std::vector<std::string>& overrides = {});

const std::vector<std::string>& experiment_tags();

struct ResultRow {
  std::string experiment;
  long trial = 0;  // -1 for aggregate rows
  long t = 0;
  std::string metric;
  double value = 0.0;
};

struct RunResult {
  struct Aggregate {
    std::vector<double> mean;
    std::vector<double> std_error;
  };
  // metric -> one series per trial (scalars are length-1 series)
  std::map<std::string, std::vector<std::vector<double>>> trial_series;
  std::map<std::string, Aggregate> aggregates;
  // Experiment-specific derived rows (medians, survival curves, ratios).
  std::vector<ResultRow> extra;
};

// Runs all trials of the configured experiment. Trial i draws its stream
// from derive_seed(config.seed, i); trials run on a bounded worker pool
// sized by FAIRBANDIT_THREADS (default: hardware concurrency) and results
// are merged by trial index, so output is independent of scheduling.
RunResult run_experiment(const ExperimentConfig& config);

// Long-format rows. Per-trial series are thinned to every config.stride-th
// round (the final round always kept); aggregates are written in full.
std::vector<ResultRow> per_trial_rows(const ExperimentConfig& config,
                                      const RunResult& result);
std::vector<ResultRow> aggregate_rows(const ExperimentConfig& config,
                                      const RunResult& result);

// CSV with header "experiment,trial,t,metric,value".
void write_csv(const std::vector<ResultRow>& rows, const std::string& path);
std::vector<ResultRow> read_csv(const std::string& path);

// Runs the experiment and writes results.csv and aggregate.csv under
// out_dir, creating it if needed.
RunResult run_and_write(const ExperimentConfig& config, const std::string& out_dir);

// Number of workers the runner would use.
int worker_count(int trials);

}  // namespace fairbandit

#endif
