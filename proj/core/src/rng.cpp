#include "infogather/core/rng.hpp"

#include <cmath>
#include <numbers>

namespace infogather {
namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

RngStream::RngStream(std::uint64_t seed) : seed_(seed), key_(mix64(seed + kGolden)) {}

RngStream::RngStream(std::uint64_t seed, std::uint64_t key) : seed_(seed), key_(key) {}

std::uint64_t RngStream::next_u64() {
  ++counter_;
  return mix64(key_ + counter_ * kGolden);
}

double RngStream::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double RngStream::normal() {
  if (spare_normal_) {
    const double z = *spare_normal_;
    spare_normal_.reset();
    return z;
  }
  // 1 - uniform() lies in (0, 1], so the log is finite.
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * std::numbers::pi * u2;
  spare_normal_ = r * std::sin(a);
  return r * std::cos(a);
}

Vec RngStream::normal_vec(int n) {
  Vec z(n);
  for (int i = 0; i < n; ++i) z[i] = normal();
  return z;
}

Vec RngStream::uniform_vec(const Vec& lo, const Vec& hi) {
  Vec u(lo.size());
  for (Eigen::Index i = 0; i < lo.size(); ++i) u[i] = uniform(lo[i], hi[i]);
  return u;
}

RngStream RngStream::split(std::uint64_t id) const {
  return RngStream(seed_, mix64(key_ ^ mix64(id * kGolden + 0x632be59bd9b4e019ULL)));
}

}  // namespace infogather
