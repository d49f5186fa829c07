#pragma once

#include <mutex>
#include <optional>
#include <vector>

#include "codedshift/generator_system.hpp"
#include "codedshift/rint.hpp"

namespace codedshift {

// sum_{k=1}^{N} c_k k^w x^k, exact
Rat weighted_power_sum(const std::vector<BigInt>& c, const Rat& x, long N, int w);

// Upper bound for sum_{k>N} k^w |G_k| x^k taken from the tail control, or nullopt
// when the bound does not apply at x. For GapEpsilon, gap_scale must be U*theta with
// U >= lambda* and theta >= e^-eps; the ratio is gap_scale * x.
std::optional<Rat> tail_sum_bound(const TailControl& tc, const Rat& x, long N, int w,
                                  const Rat& gap_scale, long finite_maxlen);

// certified rational theta with e^-eps <= theta < 1
Rat gap_theta(const Rat& eps);

// Thread-safe cache of |G_k| for one system.
class CountCache {
 public:
  explicit CountCache(const GeneratorSystem& sys) : sys_(sys) {}
  std::vector<BigInt> get(long K);

 private:
  const GeneratorSystem& sys_;
  std::mutex mu_;
  std::vector<BigInt> c_;
};

}  // namespace codedshift
