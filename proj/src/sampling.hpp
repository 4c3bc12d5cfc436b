#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace rck {

// Deterministic, platform-independent sampling.  splitmix64 stream; doubles
// from the top 53 bits.  Identical seeds give identical point sets on every
// platform, which the byte-identical report contract relies on.
class Rng {
public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  uint64_t next() {
    uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  int uniform_int(int lo, int hi) {  // inclusive bounds
    return lo + static_cast<int>(next() % static_cast<uint64_t>(hi - lo + 1));
  }

private:
  uint64_t state_;
};

struct Region {
  std::vector<std::pair<double, double>> bounds;  // per coordinate
};

std::vector<std::vector<double>> sample_points(const Region& region, int count,
                                               uint64_t seed);

}  // namespace rck
