#pragma once

#include "sideknow/types.hpp"

#include <cstdint>
#include <random>
#include <string_view>

namespace sideknow {

/// Deterministic random stream keyed by (seed, label). Distinct labels give
/// unrelated streams; `substream(i)` derives per-task children so parallel
/// work is reproducible regardless of scheduling.
class Rng {
 public:
  Rng(std::uint64_t seed, std::string_view stream);

  Rng substream(std::uint64_t index) const;
  Rng substream(std::string_view label) const;

  std::uint64_t next_u64() { return engine_(); }
  double uniform();  // [0, 1)
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal();
  /// +1 or -1 with equal probability.
  double rademacher() { return (engine_() >> 63) ? 1.0 : -1.0; }
  std::size_t below(std::size_t bound);

  Vector normal_vector(Index n);
  Vector rademacher_vector(Index n);
  /// Uniform on the unit sphere in R^n.
  Vector unit_vector(Index n);

  std::uint64_t key() const { return key_; }
  std::mt19937_64& engine() { return engine_; }

 private:
  explicit Rng(std::uint64_t key);

  std::uint64_t key_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> gauss_{0.0, 1.0};
};

/// Convenience wrapper matching the seeded_rng(seed, stream) entry point.
inline Rng seeded_rng(std::uint64_t seed, std::string_view stream) { return Rng(seed, stream); }

template <typename T>
void shuffle(std::vector<T>& items, Rng& rng) {
  for (std::size_t i = items.size(); i > 1; --i) std::swap(items[i - 1], items[rng.below(i)]);
}

}  // namespace sideknow
