#include "infogather/harness/episode.hpp"

#include "infogather/core/errors.hpp"
#include "infogather/estimation/ekf.hpp"
#include "infogather/estimation/learning.hpp"
#include "infogather/infocost/composite.hpp"
#include "infogather/planner/cem.hpp"

#include <chrono>

namespace infogather::harness {

EpisodeRecord run_episode(const ExperimentConfig& cfg, const systems::SystemModel& sys,
                          const Condition& condition, std::uint64_t seed) {
  EpisodeRecord record;
  record.condition = condition.label();
  record.seed = seed;

  const RngStream base(seed);
  RngStream prior_rng = base.split(streams::kPrior);
  RngStream nature_rng = base.split(streams::kNature);
  RngStream policy_rng = base.split(streams::kPolicy);
  const RngStream planner_root = base.split(streams::kPlanner);
  RngStream heldout_rng = base.split(streams::kHeldout);

  const Vec& theta_true = sys.theta_true();
  HeldoutSet heldout;
  try {
    heldout = gen_heldout(sys, theta_true, cfg.heldout, heldout_rng);
  } catch (const std::exception& e) {
    record.aborted = true;
    record.error = std::string("held-out generation: ") + e.what();
    return record;
  }
  estimation::LearningProcess process(
      sys, estimation::make_initial_belief(theta_true, cfg.prior_std, prior_rng),
      sys.initial_state(), theta_true);

  infocost::CostContext ctx;
  ctx.sys = &sys;
  ctx.lambda = condition.lambda;
  ctx.task = cfg.task;
  ctx.directed_info = cfg.directed_info;
  planner::WarmStart warm;

  int step = 0;
  try {
    for (step = 0; step < cfg.episode_length; ++step) {
      const auto start = std::chrono::steady_clock::now();
      const Vec x = process.state();
      Vec u;
      double info = 0.0;
      if (condition.random) {
        u = policy_rng.uniform_vec(sys.control_bounds().lo, sys.control_bounds().hi);
      } else {
        ctx.belief = process.belief();
        ctx.x0 = x;
        RngStream step_rng = planner_root.split(static_cast<std::uint64_t>(step));
        auto [first, plan] = planner::receding_horizon_step(ctx, cfg.planner, cfg.info_variant, step_rng, warm);
        u = std::move(first);
        if (ctx.lambda != 0.0) {
          info = plan.cost_breakdown.info;
        } else {
          // Passive planning never looks at the information term; report it
          // for the executed plan so the conditions can be compared.
          RngStream diag_rng = step_rng.split(0);
          info = infocost::info_cost(ctx, plan.controls, cfg.info_variant, diag_rng).info;
        }
      }

      process.step(u, nature_rng);

      StepRow row;
      row.step = step + 1;
      row.param_error = (process.belief().mean - process.theta()).norm();
      row.cov_trace = process.belief().cov.trace();
      row.task_cost = infocost::task_cost(cfg.task, {x, process.state()}, {u});
      row.info_cost = info;
      if (cfg.record_timing) {
        row.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
      }
      record.rows.push_back(row);

      const bool last = step + 1 == cfg.episode_length;
      if (last || (cfg.heldout.eval_every > 0 && (step + 1) % cfg.heldout.eval_every == 0)) {
        record.heldout.push_back({step + 1, evaluate_heldout(process.belief(), sys, heldout)});
      }
    }
  } catch (const std::exception& e) {
    record.aborted = true;
    record.error = StepError(step + 1, e.what()).what();
    try {
      record.heldout.push_back({step, evaluate_heldout(process.belief(), sys, heldout)});
    } catch (const std::exception&) {
    }
  }
  return record;
}

EpisodeRecord run_episode(const ExperimentConfig& cfg, const Condition& condition, std::uint64_t seed) {
  const auto sys = make_system(cfg.system);
  return run_episode(cfg, *sys, condition, seed);
}

}  // namespace infogather::harness
