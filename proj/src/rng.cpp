#include "som/rng.hpp"

#include <cmath>

namespace som {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
  return splitmix64(a ^ (splitmix64(b) + 0x9e3779b97f4a7c15ull));
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t id0, std::uint64_t id1,
                     std::uint64_t id2) {
  key_ = mix(mix(mix(splitmix64(seed), id0), id1), id2);
}

RngStream RngStream::substream(std::uint64_t id0, std::uint64_t id1,
                               std::uint64_t id2) const {
  RngStream s(0);
  s.key_ = mix(mix(mix(key_, id0 + 1), id1), id2);
  s.counter_ = 0;
  s.have_cached_normal_ = false;
  return s;
}

std::uint64_t RngStream::next_u64() { return splitmix64(key_ ^ splitmix64(counter_++)); }

double RngStream::uniform() {
  // 53 random bits into [0, 1)
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::normal() {
  if (have_cached_normal_) {
    have_cached_normal_ = false;
    return cached_normal_;
  }
  double u1 = uniform();
  double u2 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  double r = std::sqrt(-2.0 * std::log(u1));
  double a = 2.0 * M_PI * u2;
  cached_normal_ = r * std::sin(a);
  have_cached_normal_ = true;
  return r * std::cos(a);
}

std::uint64_t RngStream::below(std::uint64_t n) {
  // Rejection-free modulo is fine here; n is tiny relative to 2^64.
  return next_u64() % n;
}

}  // namespace som
