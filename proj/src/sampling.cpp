#include "sampling.hpp"

#include "errors.hpp"

namespace rck {

std::vector<std::vector<double>> sample_points(const Region& region, int count,
                                               uint64_t seed) {
  if (count < 1) throw Error(ErrorKind::InvalidArgument, "sample count must be >= 1");
  for (const auto& [lo, hi] : region.bounds)
    if (!(lo < hi)) throw Error(ErrorKind::InvalidArgument, "region bounds need lo < hi");
  Rng rng(seed);
  std::vector<std::vector<double>> pts;
  pts.reserve(static_cast<size_t>(count));
  for (int i = 0; i < count; ++i) {
    std::vector<double> p;
    p.reserve(region.bounds.size());
    for (const auto& [lo, hi] : region.bounds) p.push_back(rng.uniform(lo, hi));
    pts.push_back(std::move(p));
  }
  return pts;
}

}  // namespace rck
