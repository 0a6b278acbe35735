#include "infogather/estimation/ekf.hpp"
#include "infogather/infocost/composite.hpp"
#include "infogather/infocost/info_cost.hpp"
#include "infogather/planner/cem.hpp"
#include "infogather/systems/double_integrator.hpp"
#include "infogather/systems/pursuit_evasion.hpp"

#include <benchmark/benchmark.h>

using namespace infogather;

namespace {

systems::DoubleIntegrator noisy_double_integrator() {
  systems::CommonOptions common;
  common.state_noise = 1e-2 * Mat::Identity(4, 4);
  return systems::DoubleIntegrator({}, common);
}

VecSeq random_controls(const systems::SystemModel& sys, int horizon, RngStream& rng) {
  VecSeq u;
  for (int i = 0; i < horizon; ++i) u.push_back(rng.uniform_vec(sys.control_bounds().lo, sys.control_bounds().hi));
  return u;
}

infocost::CostContext context(const systems::SystemModel& sys, double lambda) {
  infocost::CostContext ctx;
  ctx.sys = &sys;
  ctx.belief = {sys.theta_true(), 0.25 * Mat::Identity(sys.param_dim(), sys.param_dim())};
  ctx.x0 = sys.initial_state();
  ctx.lambda = lambda;
  ctx.task.kind = infocost::TaskCostSpec::Kind::kNone;
  return ctx;
}

}  // namespace

static void BM_EkfUpdate(benchmark::State& state) {
  const auto sys = noisy_double_integrator();
  RngStream rng(1);
  GaussianBelief b{sys.theta_true(), 0.25 * Mat::Identity(24, 24)};
  const Vec x = sys.sample_state(rng);
  const Vec u = Vec::Constant(2, 0.5);
  const Vec o = sys.step(x, u, sys.theta_true());
  for (auto _ : state) benchmark::DoNotOptimize(estimation::ekf_update(b, o, u, x, sys));
}
BENCHMARK(BM_EkfUpdate);

static void BM_MiCost(benchmark::State& state) {
  const auto sys = noisy_double_integrator();
  RngStream rng(2);
  const VecSeq u = random_controls(sys, static_cast<int>(state.range(0)), rng);
  const GaussianBelief b{sys.theta_true(), 0.25 * Mat::Identity(24, 24)};
  const Vec x0 = sys.sample_state(rng);
  for (auto _ : state) benchmark::DoNotOptimize(infocost::mi_cost(sys, x0, u, b));
}
BENCHMARK(BM_MiCost)->Arg(5)->Arg(10)->Arg(20);

static void BM_DirectedInfoMc(benchmark::State& state) {
  const auto sys = noisy_double_integrator();
  RngStream rng(3);
  const VecSeq u = random_controls(sys, 5, rng);
  const GaussianBelief b{sys.theta_true(), 0.25 * Mat::Identity(24, 24)};
  const Vec x0 = sys.sample_state(rng);
  infocost::DirectedInfoConfig cfg;
  cfg.n_belief_samples = static_cast<int>(state.range(0));
  for (auto _ : state) {
    RngStream eval(4);
    benchmark::DoNotOptimize(infocost::directed_info_cost_mc(sys, x0, u, b, cfg, eval));
  }
}
BENCHMARK(BM_DirectedInfoMc)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);

static void BM_CemPlanDoubleIntegrator(benchmark::State& state) {
  const auto sys = noisy_double_integrator();
  const auto ctx = context(sys, 10.0);
  planner::CemConfig cfg;
  cfg.population = static_cast<int>(state.range(0));
  for (auto _ : state) {
    RngStream rng(5);
    benchmark::DoNotOptimize(planner::cem_plan(ctx, cfg, infocost::InfoVariant::kClosedFormMi, rng));
  }
}
BENCHMARK(BM_CemPlanDoubleIntegrator)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

static void BM_PeMpcStep(benchmark::State& state) {
  const systems::PursuitEvasionMpc sys;
  RngStream rng(6);
  const Vec x = sys.sample_state(rng);
  const Vec u = Vec::Zero(2);
  for (auto _ : state) benchmark::DoNotOptimize(sys.step(x, u, sys.theta_true()));
}
BENCHMARK(BM_PeMpcStep)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
