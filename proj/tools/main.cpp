#include "infogather/core/errors.hpp"
#include "infogather/harness/config.hpp"
#include "infogather/harness/episode.hpp"
#include "infogather/harness/experiment.hpp"
#include "infogather/harness/verification.hpp"
#include "infogather/systems/registry.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>

namespace ig = infogather;
namespace harness = infogather::harness;

namespace {

constexpr int kOk = 0;
constexpr int kCheckFailed = 1;
constexpr int kConfigError = 2;

struct CommonArgs {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  int jobs = 1;
  std::vector<std::string> overrides;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config, "Experiment config (YAML)")->required()->check(CLI::ExistingFile);
  cmd->add_option("--out", args.out, "Output directory (overrides output_dir)");
  cmd->add_option("--seed", args.seed, "Run this seed only");
  cmd->add_option("--set", args.overrides, "Override a config value, e.g. planner.population=512")
      ->take_all();
}

harness::ExperimentConfig load(const CommonArgs& args) {
  std::vector<std::string> overrides = args.overrides;
  if (args.seed) overrides.push_back("seeds=[" + std::to_string(*args.seed) + "]");
  if (!args.out.empty()) overrides.push_back("output_dir=\"" + args.out + "\"");
  return harness::load_config(args.config, overrides);
}

int cmd_run(const CommonArgs& args) {
  const auto cfg = load(args);
  const auto result = harness::run_experiment(cfg, args.jobs);
  harness::write_outputs(cfg, result);

  std::cout << "wrote " << cfg.output_dir << "/metrics.csv, heldout.csv, summary.json\n";
  for (const auto& s : result.summaries) {
    std::cout << s.condition << ": param_error " << s.median_final_param_error << ", cov_trace "
              << s.median_final_cov_trace << ", heldout single " << s.median_heldout_single_step_err
              << ", autoregressive " << s.median_heldout_autoregressive_err;
    if (s.aborted) std::cout << " (" << s.aborted << " aborted)";
    std::cout << "\n";
  }
  for (const auto& t : result.trend_checks) {
    std::cout << (t.passed ? "trend ok   " : "trend FAIL ") << t.metric << ": " << t.active << " "
              << t.active_median << " vs " << t.baseline << " " << t.baseline_median << "\n";
  }
  for (const auto& ep : result.episodes) {
    if (ep.aborted) std::cerr << "episode " << ep.condition << " seed " << ep.seed << " aborted: " << ep.error << "\n";
  }
  return kOk;
}

int cmd_episode(const CommonArgs& args, const std::string& condition_label) {
  const auto cfg = load(args);
  std::optional<harness::Condition> chosen;
  for (const auto& c : harness::conditions(cfg)) {
    if (c.label() == condition_label) chosen = c;
  }
  if (!chosen) {
    if (condition_label == "random") {
      chosen = harness::Condition{true, 0.0};
    } else if (condition_label.rfind("lambda=", 0) == 0) {
      try {
        chosen = harness::Condition{false, std::stod(condition_label.substr(7))};
      } catch (const std::exception&) {
      }
    }
  }
  if (!chosen || chosen->lambda < 0.0) {
    throw ig::ConfigError("unknown condition '" + condition_label + "' (use random or lambda=<value>)");
  }
  const auto ep = harness::run_episode(cfg, *chosen, cfg.seeds.front());
  std::cout << harness::metrics_csv_header() << "\n" << harness::format_metrics_rows(cfg.experiment, ep);
  if (!ep.heldout.empty()) {
    const auto& h = ep.heldout.back().errors;
    std::cerr << "heldout single_step_err " << h.single_step_err << ", autoregressive_err "
              << h.autoregressive_err << "\n";
  }
  if (ep.aborted) {
    std::cerr << "episode aborted: " << ep.error << "\n";
    return kCheckFailed;
  }
  return kOk;
}

int cmd_verify() {
  bool ok = true;
  for (const auto& check : ig::verify::run_all()) {
    std::cout << (check.passed ? "PASS " : "FAIL ") << check.name << " (" << check.detail << ")\n";
    ok = ok && check.passed;
  }
  return ok ? kOk : kCheckFailed;
}

int cmd_list_systems() {
  for (const auto& s : ig::systems::list_systems()) {
    std::cout << s.id << ": " << s.description << "\n"
              << "  dims: state " << s.dims.state << ", control " << s.dims.control << ", theta "
              << s.dims.param << ", obs " << s.dims.obs << "\n  theta:";
    for (const auto& name : s.theta_layout) std::cout << " " << name;
    std::cout << "\n  params:";
    for (const auto& name : s.param_names) std::cout << " " << name;
    std::cout << "\n";
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Active information gathering experiments"};
  app.set_version_flag("--version", harness::version());
  app.require_subcommand(1);

  CommonArgs run_args;
  auto* run = app.add_subcommand("run", "Run every condition and seed of an experiment");
  add_common(run, run_args);
  run->add_option("--jobs", run_args.jobs, "Episodes to run in parallel")->check(CLI::PositiveNumber);

  CommonArgs episode_args;
  std::string condition = "lambda=0";
  auto* episode = app.add_subcommand("episode", "Run one episode and print its metrics");
  add_common(episode, episode_args);
  episode->add_option("--condition", condition, "random or lambda=<value>");
  episode->add_option("--jobs", episode_args.jobs, "Ignored; a single episode runs sequentially");

  auto* verify = app.add_subcommand("verify", "Run the built-in numerical self-checks");
  auto* list = app.add_subcommand("list-systems", "List the available systems");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*run) return cmd_run(run_args);
    if (*episode) return cmd_episode(episode_args, condition);
    if (*verify) return cmd_verify();
    if (*list) return cmd_list_systems();
  } catch (const ig::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kCheckFailed;
  }
  return kOk;
}
