#include "sideknow/rng.hpp"

namespace sideknow {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::mt19937_64 make_engine(std::uint64_t key) {
  std::seed_seq seq{static_cast<std::uint32_t>(key), static_cast<std::uint32_t>(key >> 32),
                    static_cast<std::uint32_t>(splitmix64(key)),
                    static_cast<std::uint32_t>(splitmix64(key) >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace

Rng::Rng(std::uint64_t seed, std::string_view stream)
    : Rng(splitmix64(splitmix64(seed) ^ fnv1a(stream))) {}

Rng::Rng(std::uint64_t key) : key_(key), engine_(make_engine(key)) {}

Rng Rng::substream(std::uint64_t index) const {
  return Rng(splitmix64(key_ ^ splitmix64(index + 0x632be59bd9b4e019ULL)));
}

Rng Rng::substream(std::string_view label) const {
  return Rng(splitmix64(key_ ^ fnv1a(label)));
}

double Rng::uniform() {
  // 53 random mantissa bits.
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::normal() { return gauss_(engine_); }

std::size_t Rng::below(std::size_t bound) {
  if (bound <= 1) return 0;
  std::uniform_int_distribution<std::size_t> dist(0, bound - 1);
  return dist(engine_);
}

Vector Rng::normal_vector(Index n) {
  Vector v(n);
  for (Index i = 0; i < n; ++i) v(i) = normal();
  return v;
}

Vector Rng::rademacher_vector(Index n) {
  Vector v(n);
  for (Index i = 0; i < n; ++i) v(i) = rademacher();
  return v;
}

Vector Rng::unit_vector(Index n) {
  Vector v = normal_vector(n);
  double norm = v.norm();
  while (norm == 0.0) {
    v = normal_vector(n);
    norm = v.norm();
  }
  return v / norm;
}

}  // namespace sideknow
