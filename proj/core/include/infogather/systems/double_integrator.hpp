#pragma once

#include "infogather/systems/system_model.hpp"

#include <utility>

namespace infogather::systems {

/// Planar double integrator x' = A x + B u with A (4x4) and B (4x2) unknown.
///
/// State [px, py, vx, vy], control [ax, ay]. Theta layout is
/// vec(A) followed by vec(B), both column-major (24 entries).
class DoubleIntegrator final : public SystemModel {
 public:
  struct Params {
    double dt = 0.1;
    double accel_limit = 2.0;
  };

  DoubleIntegrator() : DoubleIntegrator(Params()) {}
  explicit DoubleIntegrator(const Params& params, const CommonOptions& common = {});

  std::string name() const override { return "double_integrator"; }
  std::vector<std::string> param_layout() const override;
  Vec sample_state(RngStream& rng) const override;

  double dt() const { return params_.dt; }

  /// Exact zero-order-hold discretization of the planar double integrator.
  static Mat nominal_a(double dt);
  static Mat nominal_b(double dt);
  static Vec pack(const Mat& a, const Mat& b);
  static std::pair<Mat, Mat> unpack(const Vec& theta);

 protected:
  Vec do_step(const Vec& x, const Vec& u, const Vec& theta) const override;
  Mat do_jac_f_theta(const Vec& x, const Vec& u, const Vec& theta) const override;

 private:
  Params params_;
};

}  // namespace infogather::systems
