#include "infogather/core/errors.hpp"
#include "infogather/core/parallel.hpp"
#include "infogather/planner/cem.hpp"
#include "infogather/systems/double_integrator.hpp"
#include "lqr_oracle.hpp"

#include <gtest/gtest.h>

#include <atomic>
#include <iostream>

using namespace infogather;
using namespace infogather::planner;
using infogather::infocost::CostContext;
using infogather::infocost::InfoVariant;
using infogather::infocost::TaskCostSpec;
using infogather::systems::DoubleIntegrator;
using infogather::testing_support::FiniteHorizonLqr;

namespace {

ControlBounds box(int nu, double lim) { return {Vec::Constant(nu, -lim), Vec::Constant(nu, lim)}; }

SequenceCost quadratic(const VecSeq& target) {
  return [target](const VecSeq& u, RngStream&) {
    double c = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) c += (u[i] - target[i]).squaredNorm();
    return c;
  };
}

CostContext regulation_context(const DoubleIntegrator& sys, const Vec& x0, const Vec& goal,
                               const Vec& weights, double effort) {
  CostContext ctx;
  ctx.sys = &sys;
  ctx.belief = {sys.theta_true(), Mat::Zero(24, 24)};
  ctx.x0 = x0;
  ctx.lambda = 0.0;
  ctx.task.kind = TaskCostSpec::Kind::kGoalDeviation;
  ctx.task.goal = goal;
  ctx.task.weights = weights;
  ctx.task.control_effort_weight = effort;
  return ctx;
}

}  // namespace

TEST(Parallel, RunsEveryIndexAndRethrowsLowestFailure) {
  std::vector<int> hits(100, 0);
  parallel_for(100, 4, [&](int i) { hits[i]++; });
  for (int h : hits) EXPECT_EQ(h, 1);
  try {
    parallel_for(50, 3, [](int i) {
      if (i == 7 || i == 30) throw std::runtime_error(std::to_string(i));
    });
    FAIL();
  } catch (const std::runtime_error& e) {
    EXPECT_STREQ(e.what(), "7");
  }
}

TEST(Cem, QuadraticReachesMinimizer) {
  VecSeq target{(Vec(2) << 0.5, -1.0).finished(), (Vec(2) << 1.5, 0.2).finished(),
                (Vec(2) << -0.7, 0.9).finished()};
  CemConfig cfg;
  cfg.horizon = 3;
  RngStream rng(1);
  const CemSearch r = cem_minimize(quadratic(target), box(2, 2.0), cfg, rng);
  for (int i = 0; i < 3; ++i) EXPECT_LT((r.controls[i] - target[i]).cwiseAbs().maxCoeff(), 0.05);
  EXPECT_EQ(r.iterations_run, 8);
}

TEST(Cem, EliteHistoryNonIncreasingAndBoundsRespected) {
  VecSeq target(4, Vec::Constant(1, 5.0));  // outside the bounds
  CemConfig cfg;
  cfg.horizon = 4;
  cfg.population = 32;
  cfg.elites = 4;
  RngStream rng(2);
  const CemSearch r = cem_minimize(quadratic(target), box(1, 1.0), cfg, rng);
  for (std::size_t i = 1; i < r.elite_cost_history.size(); ++i) {
    EXPECT_LE(r.elite_cost_history[i], r.elite_cost_history[i - 1]);
  }
  for (const Vec& u : r.controls) EXPECT_LE(std::abs(u[0]), 1.0);
}

TEST(Cem, NeverWorseThanInitialMean) {
  VecSeq target(3, Vec::Constant(1, 0.3));
  CemConfig cfg;
  cfg.horizon = 3;
  cfg.population = 4;
  cfg.elites = 2;
  cfg.iterations = 1;
  const VecSeq init(3, Vec::Constant(1, 0.31));
  RngStream rng(3);
  const CemSearch r = cem_minimize(quadratic(target), box(1, 1.0), cfg, rng, &init);
  EXPECT_LE(r.cost, quadratic(target)(init, rng));
}

TEST(Cem, PopulationEqualsElites) {
  VecSeq target(2, Vec::Constant(1, 0.1));
  CemConfig cfg;
  cfg.horizon = 2;
  cfg.population = 8;
  cfg.elites = 8;
  RngStream rng(4);
  const CemSearch r = cem_minimize(quadratic(target), box(1, 1.0), cfg, rng);
  EXPECT_LE(r.cost, quadratic(target)(VecSeq(2, Vec::Zero(1)), rng));
}

TEST(Cem, AllInvalidThrows) {
  CemConfig cfg;
  cfg.horizon = 2;
  cfg.population = 8;
  cfg.elites = 2;
  RngStream rng(5);
  const SequenceCost bad = [](const VecSeq&, RngStream&) -> double { throw NonFiniteOutput("boom"); };
  EXPECT_THROW(cem_minimize(bad, box(1, 1.0), cfg, rng), AllCandidatesInvalid);
}

TEST(Cem, SomeInvalidCandidatesAreSkipped) {
  CemConfig cfg;
  cfg.horizon = 1;
  RngStream rng(6);
  const SequenceCost cost = [](const VecSeq& u, RngStream&) {
    if (u[0][0] < 0.0) throw NonFiniteOutput("negative");
    return (u[0][0] - 0.5) * (u[0][0] - 0.5);
  };
  const CemSearch r = cem_minimize(cost, box(1, 1.0), cfg, rng);
  EXPECT_NEAR(r.controls[0][0], 0.5, 0.05);
}

TEST(Cem, ConfigValidation) {
  CemConfig cfg;
  cfg.elites = cfg.population + 1;
  EXPECT_THROW(validate(cfg, 1), ConfigError);
  cfg = {};
  cfg.horizon = 0;
  EXPECT_THROW(validate(cfg, 1), ConfigError);
  cfg = {};
  cfg.momentum = 1.0;
  EXPECT_THROW(validate(cfg, 1), ConfigError);
}

TEST(Cem, DeterministicAndParallelMatchesSequential) {
  DoubleIntegrator sys;
  Vec goal(4);
  goal << 1, -0.5, 0, 0;
  CostContext ctx = regulation_context(sys, Vec::Zero(4), goal, Vec(), 0.01);
  ctx.belief.cov = 0.1 * Mat::Identity(24, 24);
  ctx.lambda = 5.0;
  CemConfig cfg;
  cfg.population = 64;
  RngStream a(7), b(7), c(7);
  const PlanResult r1 = cem_plan(ctx, cfg, InfoVariant::kClosedFormMi, a);
  const PlanResult r2 = cem_plan(ctx, cfg, InfoVariant::kClosedFormMi, b);
  cfg.threads = 4;
  const PlanResult r3 = cem_plan(ctx, cfg, InfoVariant::kClosedFormMi, c);
  for (int i = 0; i < cfg.horizon; ++i) {
    EXPECT_EQ(r1.controls[i], r2.controls[i]);
    EXPECT_EQ(r1.controls[i], r3.controls[i]);
  }
  EXPECT_EQ(r1.best_cost, r3.best_cost);
  EXPECT_EQ(r1.elite_cost_history, r3.elite_cost_history);
}

TEST(Cem, BestCostMatchesReevaluationForStochasticCost) {
  DoubleIntegrator sys;
  CostContext ctx = regulation_context(sys, Vec::Zero(4), Vec::Ones(4), Vec(), 0.0);
  ctx.belief.cov = 0.1 * Mat::Identity(24, 24);
  ctx.lambda = 1.0;
  ctx.directed_info.n_belief_samples = 64;
  ctx.directed_info.n_eval_components = 8;
  ctx.directed_info.n_noise_samples = 2;
  CemConfig cfg;
  cfg.horizon = 3;
  cfg.population = 16;
  cfg.elites = 4;
  cfg.iterations = 3;
  RngStream rng(8);
  const PlanResult r = cem_plan(ctx, cfg, InfoVariant::kDirectedInfoMc, rng);
  EXPECT_EQ(r.best_cost, r.elite_cost_history.back());
  EXPECT_NEAR(r.best_cost, r.cost_breakdown.task + r.cost_breakdown.info, 1e-12);
}

TEST(RecedingHorizon, WarmStartIsShiftedPlan) {
  DoubleIntegrator sys;
  CostContext ctx = regulation_context(sys, Vec::Zero(4), Vec::Ones(4), Vec(), 0.01);
  CemConfig cfg;
  cfg.population = 32;
  cfg.elites = 4;
  cfg.iterations = 2;
  WarmStart warm;
  RngStream rng(9);
  const auto [u0, plan] = receding_horizon_step(ctx, cfg, InfoVariant::kClosedFormMi, rng, warm);
  EXPECT_EQ(u0, plan.controls.front());
  ASSERT_EQ(static_cast<int>(warm.mean.size()), cfg.horizon);
  for (int i = 0; i + 1 < cfg.horizon; ++i) EXPECT_EQ(warm.mean[i], plan.controls[i + 1]);
  EXPECT_EQ(warm.mean.back(), plan.controls.back());

  // With a single iteration whose only candidate is the mean, the plan is the warm start.
  cfg.population = 1;
  cfg.elites = 1;
  cfg.iterations = 1;
  const VecSeq expected = warm.mean;
  const auto [u1, plan1] = receding_horizon_step(ctx, cfg, InfoVariant::kClosedFormMi, rng, warm);
  EXPECT_EQ(plan1.controls, expected);
}

TEST(RecedingHorizon, IdenticalSeedsGiveIdenticalControls) {
  DoubleIntegrator sys;
  CostContext ctx = regulation_context(sys, Vec::Ones(4), Vec::Zero(4), Vec(), 0.01);
  CemConfig cfg;
  cfg.population = 32;
  WarmStart w1, w2;
  RngStream a(10), b(10);
  EXPECT_EQ(receding_horizon_step(ctx, cfg, InfoVariant::kClosedFormMi, a, w1).first,
            receding_horizon_step(ctx, cfg, InfoVariant::kClosedFormMi, b, w2).first);
}

TEST(Cem, OpenLoopGoalReachingNearLqrOptimum) {
  DoubleIntegrator sys;
  Vec goal(4), w(4);
  goal << 1.0, 0.5, 0.0, 0.0;
  w << 1.0, 1.0, 0.1, 0.1;
  const double effort = 0.3;
  const int horizon = 20;
  const CostContext ctx = regulation_context(sys, Vec::Zero(4), goal, w, effort);

  const FiniteHorizonLqr lqr(DoubleIntegrator::nominal_a(0.1), DoubleIntegrator::nominal_b(0.1),
                             w.asDiagonal(), effort, horizon);
  const Vec e0 = -goal;
  // The unconstrained optimum must respect the bounds for the oracle to apply.
  Vec e = e0;
  for (int k = 0; k < horizon; ++k) {
    const Vec u = -lqr.gains[k] * e;
    ASSERT_LE(u.cwiseAbs().maxCoeff(), 2.0);
    e = DoubleIntegrator::nominal_a(0.1) * e + DoubleIntegrator::nominal_b(0.1) * u;
  }
  const double oracle = lqr.cost(e0);

  CemConfig cfg;
  cfg.horizon = horizon;
  cfg.iterations = 30;
  RngStream rng(11);
  const PlanResult plan = cem_plan(ctx, cfg, InfoVariant::kClosedFormMi, rng);
  const VecSeq states = infocost::rollout_nominal(sys, ctx.x0, plan.controls, sys.theta_true());
  std::cout << "open loop: cem " << plan.best_cost << ", lqr " << oracle << ", terminal error "
            << (states.back().head(2) - goal.head(2)).norm() << "\n";
  EXPECT_LE(plan.best_cost, 1.1 * oracle);
  EXPECT_LT((states.back().head(2) - goal.head(2)).norm(), 0.1);
}
