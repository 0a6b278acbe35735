#include "infogather/harness/experiment.hpp"

#include "config_json.hpp"
#include "infogather/core/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <stdexcept>

#ifndef INFOGATHER_VERSION
#define INFOGATHER_VERSION "0.0.0"
#endif

namespace infogather::harness {
namespace {

// Round-trippable and locale-independent.
std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

nlohmann::ordered_json json_num(double v) {
  return std::isfinite(v) ? nlohmann::ordered_json(v) : nlohmann::ordered_json(num(v));
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  out << content;
  if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

}  // namespace

std::string version() { return INFOGATHER_VERSION; }

std::string metrics_csv_header() {
  return "experiment,condition,seed,step,param_error,cov_trace,task_cost,info_cost,wall_ms";
}

std::string format_metrics_rows(const std::string& experiment, const EpisodeRecord& ep) {
  std::string out;
  for (const StepRow& r : ep.rows) {
    out += experiment + "," + ep.condition + "," + std::to_string(ep.seed) + "," + std::to_string(r.step) +
           "," + num(r.param_error) + "," + num(r.cov_trace) + "," + num(r.task_cost) + "," +
           num(r.info_cost) + "," + num(r.wall_ms) + "\n";
  }
  return out;
}

double median(std::vector<double> values) {
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  if (n % 2 == 1) return values[n / 2];
  const double a = values[n / 2 - 1], b = values[n / 2];
  return std::isinf(a) || std::isinf(b) ? (std::isinf(a) ? a : b) : 0.5 * (a + b);
}

ConditionSummary summarize(const std::string& condition, const std::vector<const EpisodeRecord*>& episodes) {
  ConditionSummary s;
  s.condition = condition;
  std::vector<double> err, trace, single, autoreg;
  for (const EpisodeRecord* ep : episodes) {
    ++s.episodes;
    if (ep->aborted) ++s.aborted;
    if (!ep->rows.empty()) {
      err.push_back(ep->rows.back().param_error);
      trace.push_back(ep->rows.back().cov_trace);
    }
    if (!ep->heldout.empty()) {
      single.push_back(ep->heldout.back().errors.single_step_err);
      autoreg.push_back(ep->heldout.back().errors.autoregressive_err);
    }
  }
  s.median_final_param_error = median(err);
  s.median_final_cov_trace = median(trace);
  s.median_heldout_single_step_err = median(single);
  s.median_heldout_autoregressive_err = median(autoreg);
  return s;
}

std::vector<TrendCheck> trend_checks(const std::vector<ConditionSummary>& summaries,
                                     const std::vector<Condition>& conds) {
  std::vector<TrendCheck> out;
  const Condition* active = nullptr;
  for (const auto& c : conds) {
    if (!c.random && c.lambda > 0.0 && (!active || c.lambda > active->lambda)) active = &c;
  }
  if (!active) return out;
  auto find = [&](const std::string& label) -> const ConditionSummary* {
    for (const auto& s : summaries)
      if (s.condition == label) return &s;
    return nullptr;
  };
  const ConditionSummary* a = find(active->label());
  const std::vector<std::pair<std::string, double ConditionSummary::*>> metrics{
      {"param_error", &ConditionSummary::median_final_param_error},
      {"cov_trace", &ConditionSummary::median_final_cov_trace},
      {"heldout_single_step_err", &ConditionSummary::median_heldout_single_step_err},
      {"heldout_autoregressive_err", &ConditionSummary::median_heldout_autoregressive_err},
  };
  for (const std::string baseline : {"lambda=0", "random"}) {
    const ConditionSummary* b = find(baseline);
    if (!a || !b) continue;
    for (const auto& [name, field] : metrics) {
      TrendCheck t;
      t.metric = name;
      t.active = a->condition;
      t.baseline = b->condition;
      t.active_median = a->*field;
      t.baseline_median = b->*field;
      t.passed = t.active_median < t.baseline_median;
      out.push_back(t);
    }
  }
  return out;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, int jobs) {
  validate(cfg);
  const auto sys = make_system(cfg.system);
  const std::vector<Condition> conds = conditions(cfg);
  const int n_seeds = static_cast<int>(cfg.seeds.size());
  const int n = static_cast<int>(conds.size()) * n_seeds;

  ExperimentResult result;
  result.episodes.resize(n);
  parallel_for(n, jobs, [&](int i) {
    result.episodes[i] = run_episode(cfg, *sys, conds[i / n_seeds], cfg.seeds[i % n_seeds]);
  });

  for (std::size_t c = 0; c < conds.size(); ++c) {
    std::vector<const EpisodeRecord*> eps;
    for (int s = 0; s < n_seeds; ++s) eps.push_back(&result.episodes[c * n_seeds + s]);
    result.summaries.push_back(summarize(conds[c].label(), eps));
  }
  result.trend_checks = trend_checks(result.summaries, conds);
  return result;
}

void write_outputs(const ExperimentConfig& cfg, const ExperimentResult& result) {
  namespace fs = std::filesystem;
  const fs::path dir(cfg.output_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory '" + dir.string() + "': " + ec.message());

  std::string metrics = metrics_csv_header() + "\n";
  std::string heldout = "experiment,condition,seed,step,single_step_err,autoregressive_err\n";
  for (const auto& ep : result.episodes) {
    metrics += format_metrics_rows(cfg.experiment, ep);
    for (const auto& h : ep.heldout) {
      heldout += cfg.experiment + "," + ep.condition + "," + std::to_string(ep.seed) + "," +
                 std::to_string(h.step) + "," + num(h.errors.single_step_err) + "," +
                 num(h.errors.autoregressive_err) + "\n";
    }
  }
  write_file(dir / "metrics.csv", metrics);
  write_file(dir / "heldout.csv", heldout);

  using nlohmann::ordered_json;
  ordered_json summary;
  summary["experiment"] = cfg.experiment;
  summary["version"] = version();
  ordered_json conds = ordered_json::object();
  for (const auto& s : result.summaries) {
    conds[s.condition] = {
        {"episodes", s.episodes},
        {"aborted", s.aborted},
        {"median_final_param_error", json_num(s.median_final_param_error)},
        {"median_final_cov_trace", json_num(s.median_final_cov_trace)},
        {"median_heldout_single_step_err", json_num(s.median_heldout_single_step_err)},
        {"median_heldout_autoregressive_err", json_num(s.median_heldout_autoregressive_err)},
    };
  }
  summary["conditions"] = conds;
  ordered_json checks = ordered_json::array();
  for (const auto& t : result.trend_checks) {
    checks.push_back({{"metric", t.metric},
                      {"active", t.active},
                      {"baseline", t.baseline},
                      {"active_median", json_num(t.active_median)},
                      {"baseline_median", json_num(t.baseline_median)},
                      {"passed", t.passed}});
  }
  summary["trend_checks"] = checks;
  ordered_json episodes = ordered_json::array();
  for (const auto& ep : result.episodes) {
    episodes.push_back({{"condition", ep.condition},
                        {"seed", ep.seed},
                        {"steps", ep.rows.size()},
                        {"aborted", ep.aborted},
                        {"error", ep.error},
                        {"heldout_diverged", !ep.heldout.empty() && ep.heldout.back().errors.diverged}});
  }
  summary["episodes"] = episodes;
  summary["config"] = detail::config_json(cfg);
  write_file(dir / "summary.json", summary.dump(2) + "\n");
}

}  // namespace infogather::harness
