#ifndef KANLAB_RNG_HPP
#define KANLAB_RNG_HPP

#include <cstdint>

namespace kanlab {

// Counter-based generator: every draw is a stateless hash of
// (seed, stream, counter), so sample index -> identical values no matter
// how work is split across threads.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream)
      : seed_(seed), stream_(stream), counter_(0) {}

  std::uint64_t next_u64() {
    return mix(seed_ ^ rotl(stream_, 17), counter_++);
  }

  // uniform in [0,1)
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // uniform integer in [0, n)
  std::uint64_t uniform_index(std::uint64_t n) { return next_u64() % n; }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }
  // splitmix64-style double avalanche over the (key, counter) pair.
  static std::uint64_t mix(std::uint64_t key, std::uint64_t ctr) {
    std::uint64_t z = key + 0x9e3779b97f4a7c15ULL * (ctr + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    z ^= z >> 31;
    z += key ^ rotl(ctr, 29);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t counter_;
};

}  // namespace kanlab

#endif  // KANLAB_RNG_HPP
