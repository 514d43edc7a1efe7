#ifndef VSWAP_RNG_HPP
#define VSWAP_RNG_HPP

#include <cstdint>

namespace vswap {

std::uint64_t splitmix64(std::uint64_t& state);

// xoshiro256++ with a per-stream state derived from (seed, stream).  Streams
// with different indices are independent regardless of how paths are
// scheduled across threads, which is what makes Monte Carlo results
// reproducible bit-for-bit for a fixed (seed, paths, steps).
class Rng {
public:
  Rng(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next_u64();
  // uniform in (0, 1); never returns 0
  double uniform();
  // standard normal, Marsaglia polar method (second value cached)
  double normal();
  // gamma(shape, scale=1) via Marsaglia-Tsang, with the power boost for
  // shape < 1
  double gamma(double shape);

private:
  std::uint64_t s_[4];
  double cached_normal_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace vswap

#endif
