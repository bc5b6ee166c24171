#pragma once

#include <cmath>
#include <cstdint>

#include "pdsplit/vec.hpp"

namespace pdsplit {

// Counter-based generator (SplitMix64 over seed+counter) with Box-Muller
// normals. Output is a pure function of (seed, call index), so every
// experiment is bit-reproducible regardless of platform or libstdc++ version.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // uniform on [0,1)
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // uniform on [-1,1)
  double uniform_symmetric() { return 2.0 * uniform() - 1.0; }

  // standard normal via Box-Muller; second value of each pair is cached
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    // u1 in (0,1] keeps the log finite
    const double u1 =
        static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * 3.14159265358979323846 * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

  Vec uniform_vec(std::size_t n) {
    Vec v(n);
    for (auto& t : v) t = uniform_symmetric();
    return v;
  }

  Vec normal_vec(std::size_t n) {
    Vec v(n);
    for (auto& t : v) t = normal();
    return v;
  }

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace pdsplit
