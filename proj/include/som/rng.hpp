#pragma once

#include <cstdint>

namespace som {

// Counter-based deterministic random stream.  Streams are derived from a
// root seed plus up to three stream ids (epoch, sentence, position), so the
// draws for one sentence do not depend on batch order or on how much
// randomness other sentences consumed.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::uint64_t id0 = 0,
                     std::uint64_t id1 = 0, std::uint64_t id2 = 0);

  // Child stream keyed by additional ids; independent of draws taken so far.
  RngStream substream(std::uint64_t id0, std::uint64_t id1 = 0,
                      std::uint64_t id2 = 0) const;

  std::uint64_t next_u64();
  double uniform();            // [0, 1)
  double normal();             // standard normal, Box-Muller
  // Uniform integer in [0, n)
  std::uint64_t below(std::uint64_t n);

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  bool have_cached_normal_ = false;
  double cached_normal_ = 0.0;
};

}  // namespace som
