#include "infogather/systems/reference.hpp"

namespace infogather::systems {
namespace {

CommonOptions with_noise(Mat state_noise) {
  CommonOptions common;
  common.state_noise = std::move(state_noise);
  return common;
}

}  // namespace

ScalarLinear::ScalarLinear(double theta_true, double noise_variance, double control_limit)
    : SystemModel({1, 1, 1, 1}, {Vec::Constant(1, -control_limit), Vec::Constant(1, control_limit)},
                  Vec::Constant(1, theta_true), Vec::Constant(1, 1.0),
                  with_noise(Mat::Constant(1, 1, noise_variance)), Mat::Identity(1, 1)) {}

Vec ScalarLinear::sample_state(RngStream& rng) const { return Vec::Constant(1, rng.uniform(-1, 1)); }

Vec ScalarLinear::do_step(const Vec& x, const Vec& u, const Vec& theta) const {
  return Vec::Constant(1, theta[0] * x[0] + u[0]);
}

Mat ScalarLinear::do_jac_f_theta(const Vec& x, const Vec&, const Vec&) const {
  return Mat::Constant(1, 1, x[0]);
}

AffineInParams::AffineInParams(Mat sensitivity, Vec offset, Mat state_noise)
    : SystemModel({static_cast<int>(sensitivity.rows()), 1, static_cast<int>(sensitivity.cols()),
                   static_cast<int>(sensitivity.rows())},
                  {Vec::Constant(1, -1.0), Vec::Constant(1, 1.0)}, Vec::Zero(sensitivity.cols()),
                  Vec::Zero(sensitivity.rows()), with_noise(std::move(state_noise)),
                  Mat::Identity(sensitivity.rows(), sensitivity.rows())),
      sensitivity_(std::move(sensitivity)),
      offset_(std::move(offset)) {}

std::vector<std::string> AffineInParams::param_layout() const {
  std::vector<std::string> names;
  for (int i = 0; i < param_dim(); ++i) names.push_back("theta[" + std::to_string(i) + "]");
  return names;
}

Vec AffineInParams::sample_state(RngStream& rng) const {
  return rng.uniform_vec(Vec::Constant(state_dim(), -1.0), Vec::Constant(state_dim(), 1.0));
}

Vec AffineInParams::do_step(const Vec&, const Vec&, const Vec& theta) const {
  return offset_ + sensitivity_ * theta;
}

Mat AffineInParams::do_jac_f_theta(const Vec&, const Vec&, const Vec&) const {
  return sensitivity_;
}

}  // namespace infogather::systems
