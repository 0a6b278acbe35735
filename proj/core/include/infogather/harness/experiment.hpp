#pragma once

#include "infogather/harness/config.hpp"
#include "infogather/harness/episode.hpp"

#include <string>
#include <vector>

namespace infogather::harness {

/// Library version string written to summary.json.
std::string version();

struct ConditionSummary {
  std::string condition;
  int episodes = 0;
  int aborted = 0;
  double median_final_param_error = 0.0;
  double median_final_cov_trace = 0.0;
  double median_heldout_single_step_err = 0.0;
  double median_heldout_autoregressive_err = 0.0;
};

/// "active" (the largest lambda) compared with one baseline on one metric.
struct TrendCheck {
  std::string metric;
  std::string active;
  std::string baseline;
  double active_median = 0.0;
  double baseline_median = 0.0;
  bool passed = false;
};

struct ExperimentResult {
  /// Ordered by (condition, seed) in configuration order.
  std::vector<EpisodeRecord> episodes;
  std::vector<ConditionSummary> summaries;
  std::vector<TrendCheck> trend_checks;
};

/// Runs every (condition, seed) pair with up to `jobs` episodes in parallel.
/// The result does not depend on `jobs`.
ExperimentResult run_experiment(const ExperimentConfig& cfg, int jobs = 1);

/// Writes metrics.csv, heldout.csv and summary.json into cfg.output_dir
/// (created if missing). Throws std::runtime_error on I/O failure.
void write_outputs(const ExperimentConfig& cfg, const ExperimentResult& result);

std::string metrics_csv_header();
/// One CSV line per step row, in episode order.
std::string format_metrics_rows(const std::string& experiment, const EpisodeRecord& episode);

/// Median with the mean of the two middle values for even counts. Infinite
/// values sort last; an empty input gives NaN.
double median(std::vector<double> values);

ConditionSummary summarize(const std::string& condition, const std::vector<const EpisodeRecord*>& episodes);

/// Compares the largest-lambda condition against lambda = 0 and random on
/// the four final-metric medians (smaller is better).
std::vector<TrendCheck> trend_checks(const std::vector<ConditionSummary>& summaries,
                                     const std::vector<Condition>& conditions);

}  // namespace infogather::harness
