#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace infogather::verify {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// EKF on x' = theta x + u (50 noisy transitions) against the closed-form
/// Bayesian linear-regression posterior, tolerance 1e-6 on mean and variance.
CheckResult ekf_conjugate_oracle(int n_seeds = 20, int n_transitions = 50);

/// Kalman-form EKF covariance against the information form on random
/// instances with n_theta <= 6, n_x <= 4 and q = identity; Frobenius tolerance 1e-8.
CheckResult information_form_identity(int n_instances = 100);

struct EquivalenceOptions {
  int n_seeds = 10;
  int min_passing = 9;
  int horizon = 5;
  int n_belief_samples = 20000;
  int n_eval_components = 1024;
  int n_noise_samples = 1;
  double prior_variance = 0.25;
  double state_noise = 0.1;
  double relative_tolerance = 0.03;
};

/// Directed-information Monte-Carlo cost against the closed-form mutual
/// information cost on the double integrator, where f is linear in theta and
/// the two must agree.
CheckResult closed_form_equivalence(const EquivalenceOptions& opts = {});

std::vector<CheckResult> run_all();

}  // namespace infogather::verify
