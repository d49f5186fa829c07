#pragma once

#include <functional>
#include <vector>

#include "codedshift/generator_system.hpp"
#include "codedshift/rint.hpp"
#include "codedshift/spectral.hpp"

namespace codedshift {

struct KappaCertificate {
  RatInterval value;
  RatInterval lambda_used;
  long terms_used = 0;
  Rat tail_bound;
  Rat lipschitz_bound;  // Lipschitz constant of the partial sum in lambda
  Rat ratio;            // geometric ratio rho < 1 (0 for finite systems)
  bool declared_checked = false;
};

RatInterval kappa_partial(const GeneratorSystem& sys, const RatInterval& lambda, std::size_t ell);
KappaCertificate kappa_certified(const GeneratorSystem& sys, int n);
std::vector<Rat> kappa_lower_seq(const GeneratorSystem& sys, const RatInterval& lambda, int steps);

// Oracle n -> rational within 2^-n of kappa, backed by kappa_certified.
KappaOracle certified_kappa_oracle(const GeneratorSystem& sys);

struct GapResult {
  Rat eps;      // certified: h - r(G) > eps
  Rat r_bound;  // certified: r(G) <= r_bound, with r_bound > h/2
  long N = 0;   // lengths k > N are handled by the growth bound
};

// BoundedGrowth(b) systems.
GapResult gap_epsilon_bounded(const GeneratorSystem& sys, const RatInterval& lambda);

// Shared recipe: growth(k) bounds |G_k| and growth(k)^2 < lambda_lo^k is tested from
// k = start upward; beyond the first success the bound must stay below (caller's duty).
GapResult gap_epsilon_from_growth(const GeneratorSystem& sys, const RatInterval& lambda,
                                  const std::function<BigInt(long)>& growth, long start);

}  // namespace codedshift
