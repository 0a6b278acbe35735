#pragma once

#include "infogather/core/types.hpp"

#include <vector>

namespace infogather::testing_support {

/// Finite-horizon LQR for e' = A e + B u with stage cost
/// sum_{k=1..T} e_k' W e_k + r sum_{k=0..T-1} |u_k|^2.
struct FiniteHorizonLqr {
  std::vector<Mat> gains;  // u_k = -gains[k] e_k
  Mat cost_to_go;          // optimal cost = e_0' cost_to_go e_0

  FiniteHorizonLqr(const Mat& a, const Mat& b, const Mat& w, double r, int horizon) {
    const auto nu = b.cols();
    Mat p = w;
    gains.resize(horizon);
    for (int k = horizon - 1; k >= 0; --k) {
      const Mat m = r * Mat::Identity(nu, nu) + b.transpose() * p * b;
      gains[k] = m.ldlt().solve(b.transpose() * p * a);
      const Mat next = a.transpose() * p * (a - b * gains[k]);
      p = (k > 0 ? w : Mat::Zero(w.rows(), w.cols())) + 0.5 * (next + next.transpose());
    }
    cost_to_go = p;
  }

  double cost(const Vec& e0) const { return e0.dot(cost_to_go * e0); }
};

}  // namespace infogather::testing_support
