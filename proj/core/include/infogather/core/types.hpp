#pragma once

#include <Eigen/Dense>

#include <utility>
#include <vector>

namespace infogather {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// A time-indexed sequence of vectors (states, controls, observations).
using VecSeq = std::vector<Vec>;

/// Per-dimension closed interval [lo, hi] for controls.
struct ControlBounds {
  Vec lo;
  Vec hi;

  int dim() const { return static_cast<int>(lo.size()); }
  Vec clamp(const Vec& u) const { return u.cwiseMax(lo).cwiseMin(hi); }
  bool contains(const Vec& u) const {
    return (u.array() >= lo.array()).all() && (u.array() <= hi.array()).all();
  }
};

/// Gaussian belief over the unknown dynamics parameters.
struct GaussianBelief {
  Vec mean;
  Mat cov;

  int dim() const { return static_cast<int>(mean.size()); }
};

}  // namespace infogather
