#pragma once

#include "infogather/core/types.hpp"

#include <cstdint>
#include <optional>

namespace infogather {

/// Counter-based random stream.
///
/// Each draw is a pure function of (key, counter): the key is derived from the
/// seed, and `split(id)` derives a child key from the parent key and `id`
/// without touching the parent's counter. Parallel work therefore gets
/// reproducible substreams by splitting on a job index. The bit generator is
/// SplitMix64; normals use Box-Muller so the sequence does not depend on the
/// standard library's distribution implementations.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed);

  std::uint64_t next_u64();

  /// Uniform on [0, 1) with 53 bits of resolution.
  double uniform();
  double uniform(double lo, double hi);
  double normal();
  Vec normal_vec(int n);
  Vec uniform_vec(const Vec& lo, const Vec& hi);

  RngStream split(std::uint64_t id) const;

  std::uint64_t seed() const { return seed_; }
  std::uint64_t counter() const { return counter_; }

 private:
  RngStream(std::uint64_t seed, std::uint64_t key);

  std::uint64_t seed_;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  std::optional<double> spare_normal_;
};

/// Fixed substream ids used across the library so that e.g. held-out data
/// for a seed is identical whichever condition requests it.
namespace streams {
inline constexpr std::uint64_t kPrior = 1;
inline constexpr std::uint64_t kNature = 2;
inline constexpr std::uint64_t kPolicy = 3;
inline constexpr std::uint64_t kPlanner = 4;
inline constexpr std::uint64_t kHeldout = 5;
}  // namespace streams

}  // namespace infogather
