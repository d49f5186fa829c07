#include "codedshift/series.hpp"

#include "codedshift/errors.hpp"

namespace codedshift {

Rat weighted_power_sum(const std::vector<BigInt>& c, const Rat& x, long N, int w) {
  const BigInt& a = x.get_num();
  const BigInt& b = x.get_den();
  BigInt acc = 0, ak = 1, kw;
  long top = std::min<long>(N, static_cast<long>(c.size()) - 1);
  for (long k = 1; k <= top; ++k) {
    ak *= a;
    acc *= b;
    if (c[k] != 0) {
      mpz_ui_pow_ui(kw.get_mpz_t(), static_cast<unsigned long>(k), static_cast<unsigned long>(w));
      acc += c[k] * kw * ak;
    }
  }
  BigInt den;
  mpz_pow_ui(den.get_mpz_t(), b.get_mpz_t(), static_cast<unsigned long>(top < 0 ? 0 : top));
  Rat r(acc, den);
  r.canonicalize();
  return r;
}

std::optional<Rat> tail_sum_bound(const TailControl& tc, const Rat& x, long N, int w,
                                  const Rat& gap_scale, long finite_maxlen) {
  using K = TailControl::Kind;
  if (x <= 0) return Rat(0);
  switch (tc.kind) {
    case K::Finite:
      if (N >= finite_maxlen) return Rat(0);
      return std::nullopt;
    case K::BoundedGrowth:
      if (x >= 1) return std::nullopt;
      return Rat(tc.bound) * geom_tails(x, N, w);
    case K::PolynomialGrowth:
      if (x >= 1) return std::nullopt;
      return Rat(tc.bound) * geom_tails(x, N, w + static_cast<int>(tc.degree));
    case K::GapEpsilon: {
      Rat r = gap_scale * x;
      if (r >= 1 || r <= 0) return std::nullopt;
      return geom_tails(r, N, w);
    }
    case K::None:
      throw Error(ErrorCode::TailNotBoundable,
                  "infinite system without tail control: the Vere-Jones parameter is not computable "
                  "from generator and language oracles alone");
  }
  return std::nullopt;
}

Rat gap_theta(const Rat& eps) {
  RatInterval e = exp_bounds(-eps, 48);
  Rat t = round_up(e.hi, 48);
  if (t >= 1) throw Error(ErrorCode::RatioNotCertifiable, "gap too small to certify e^-eps < 1");
  return t;
}

std::vector<BigInt> CountCache::get(long K) {
  std::lock_guard lk(mu_);
  if (static_cast<long>(c_.size()) < K + 1) c_ = sys_.counts_up_to(K);
  return std::vector<BigInt>(c_.begin(), c_.begin() + K + 1);
}

}  // namespace codedshift
