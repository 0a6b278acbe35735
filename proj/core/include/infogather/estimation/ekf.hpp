#pragma once

#include "infogather/core/rng.hpp"
#include "infogather/core/types.hpp"
#include "infogather/systems/system_model.hpp"

namespace infogather::estimation {

/// Jitter added to the innovation covariance before it is factored.
inline constexpr double kInnovationJitter = 1e-9;

/// Throws DimensionMismatch unless mean and cov agree with each other and
/// with `expected_dim`, and the covariance is finite.
void validate_belief(const GaussianBelief& belief, int expected_dim);

/// Prior centred on theta_true + N(0, prior_std^2 I) with covariance
/// prior_std^2 I. The offset is drawn from `rng`.
GaussianBelief make_initial_belief(const Vec& theta_true, double prior_std, RngStream& rng);

/// One EKF step over the dynamics parameters.
///
/// Predict with g, correct with the observation of the next state. `x` is the
/// true current state, which is available because the filter assumes full
/// observability; systems with a non-identity observation map are rejected.
/// The posterior covariance is (I - K Q F) P_pred, symmetrized.
GaussianBelief ekf_update(const GaussianBelief& belief, const Vec& o_next, const Vec& u,
                          const Vec& x, const systems::SystemModel& sys);

/// (P^{-1} + F' Sx^{-1} F)^{-1}, the same posterior covariance written in
/// information form.
Mat info_form_covariance(const Mat& pred_cov, const Mat& sensitivity, const Mat& state_noise);

}  // namespace infogather::estimation
