#include "codedshift/rint.hpp"

#include <algorithm>
#include <cctype>
#include <vector>

#include "codedshift/errors.hpp"

namespace codedshift {

RatInterval::RatInterval(const Rat& l, const Rat& h) : lo(l), hi(h) {
  if (hi < lo) throw Error(ErrorCode::InvalidArgument, "interval with lo > hi");
}

RatInterval iv_arith(const RatInterval& a, const RatInterval& b, ArithOp op) {
  switch (op) {
    case ArithOp::add:
      return RatInterval(a.lo + b.lo, a.hi + b.hi);
    case ArithOp::sub:
      return RatInterval(a.lo - b.hi, a.hi - b.lo);
    case ArithOp::mul: {
      Rat p[4] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
      return RatInterval(*std::min_element(p, p + 4), *std::max_element(p, p + 4));
    }
    case ArithOp::div: {
      if (b.lo <= 0 && b.hi >= 0)
        throw Error(ErrorCode::DivisionByZeroInterval, "divisor interval contains 0");
      RatInterval inv(1 / b.hi, 1 / b.lo);
      return iv_arith(a, inv, ArithOp::mul);
    }
  }
  return a;
}

static Rat rpow(const Rat& x, unsigned long k) {
  Rat r;
  mpz_pow_ui(r.get_num_mpz_t(), x.get_num_mpz_t(), k);
  mpz_pow_ui(r.get_den_mpz_t(), x.get_den_mpz_t(), k);
  return r;  // already canonical
}

RatInterval iv_pow(const RatInterval& a, unsigned long k) {
  if (k == 0) return RatInterval(Rat(1));
  Rat pl = rpow(a.lo, k), ph = rpow(a.hi, k);
  if (k % 2 == 1 || a.lo >= 0) return RatInterval(pl, ph);
  if (a.hi <= 0) return RatInterval(ph, pl);
  // even power straddling zero
  return RatInterval(Rat(0), std::max(pl, ph));
}

long bit_length(const BigInt& z) {
  if (z == 0) return 0;
  return static_cast<long>(mpz_sizeinbase(z.get_mpz_t(), 2));
}

Rat ratio(const BigInt& a, const BigInt& b) {
  if (b == 0) throw Error(ErrorCode::DivisionByZeroInterval, "zero denominator");
  Rat r(a, b);
  r.canonicalize();
  return r;
}

Rat pow2(long e) {
  Rat r(1);
  if (e >= 0)
    mpz_mul_2exp(r.get_num_mpz_t(), r.get_num_mpz_t(), static_cast<mp_bitcnt_t>(e));
  else
    mpz_mul_2exp(r.get_den_mpz_t(), r.get_den_mpz_t(), static_cast<mp_bitcnt_t>(-e));
  return r;
}

Rat round_down(const Rat& x, long bits) {
  BigInt num = x.get_num();
  BigInt den = x.get_den();
  if (bits >= 0)
    mpz_mul_2exp(num.get_mpz_t(), num.get_mpz_t(), bits);
  else
    mpz_mul_2exp(den.get_mpz_t(), den.get_mpz_t(), -bits);
  BigInt q;
  mpz_fdiv_q(q.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  Rat r(q);
  return r * pow2(-bits);
}

Rat round_up(const Rat& x, long bits) {
  BigInt num = x.get_num();
  BigInt den = x.get_den();
  if (bits >= 0)
    mpz_mul_2exp(num.get_mpz_t(), num.get_mpz_t(), bits);
  else
    mpz_mul_2exp(den.get_mpz_t(), den.get_mpz_t(), -bits);
  BigInt q;
  mpz_cdiv_q(q.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  Rat r(q);
  return r * pow2(-bits);
}

RatInterval round_out(const RatInterval& a, long bits) {
  return RatInterval(round_down(a.lo, bits), round_up(a.hi, bits));
}

RatInterval pow_rounded(const RatInterval& a, unsigned long k, long bits) {
  RatInterval result(Rat(1));
  RatInterval base = round_out(a, bits);
  while (k > 0) {
    if (k & 1) result = round_out(result * base, bits);
    k >>= 1;
    if (k) base = round_out(base * base, bits);
  }
  return result;
}

long ceil_log2(const Rat& x) {
  if (x <= 0) throw Error(ErrorCode::NonPositiveArgument, "ceil_log2 of nonpositive");
  long e = bit_length(x.get_num()) - bit_length(x.get_den());
  while (pow2(e) < x) ++e;
  while (pow2(e - 1) >= x) --e;
  return e;
}

// e^f for 0 <= f <= 1 by Taylor series; terms rounded outward to 2^-(bits+8).
static RatInterval exp_taylor(const Rat& f, long bits) {
  if (f == 0) return RatInterval(Rat(1));
  Rat tlo(1), thi(1), slo(1), shi(1);
  const long g = bits + 8;
  const Rat stop = pow2(-(bits + 2));
  for (unsigned long k = 1;; ++k) {
    tlo = round_down(tlo * f / k, g);
    thi = round_up(thi * f / k, g);
    slo += tlo;
    shi += thi;
    // rest after term k is at most 2 f^{k+1}/(k+1)!
    Rat rem = round_up(2 * thi * f / (k + 1), g);
    if (rem < stop) return RatInterval(slo, shi + rem);
  }
}

RatInterval exp_bounds(const Rat& x, int n) {
  if (x == 0) return RatInterval(Rat(1));
  BigInt m;
  mpz_fdiv_q(m.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  Rat f = x - Rat(m);
  if (!m.fits_slong_p()) throw Error(ErrorCode::InvalidArgument, "exp argument too large");
  long mi = m.get_si();
  long bits = n + 12 + (mi > 0 ? 2 * mi : 0) + 2 * bit_length(BigInt(mi < 0 ? -mi : mi));
  const Rat target = pow2(-n);
  for (int attempt = 0; attempt < 64; ++attempt) {
    RatInterval ef = exp_taylor(f, bits);
    RatInterval em(Rat(1));
    if (mi != 0) {
      RatInterval e = exp_taylor(Rat(1), bits + 8);
      RatInterval ep = pow_rounded(e, static_cast<unsigned long>(mi < 0 ? -mi : mi), bits + 8);
      if (mi < 0)
        em = round_out(RatInterval(1 / ep.hi, 1 / ep.lo), bits + 8);
      else
        em = ep;
    }
    RatInterval r = round_out(em * ef, bits + 4);
    if (r.width() < target) return r;
    bits += bits / 2 + 16;
  }
  throw Error(ErrorCode::PrecisionExhausted, "exp_bounds did not converge");
}

RatInterval log_bounds(const Rat& x, int n) {
  if (x <= 0) throw Error(ErrorCode::NonPositiveArgument, "log of nonpositive number");
  if (x == 1) return RatInterval(Rat(0));
  if (x < 1) {
    RatInterval r = log_bounds(1 / x, n);
    return RatInterval(-r.hi, -r.lo);
  }
  Rat lo(0), hi(ceil_log2(x));
  const Rat target = pow2(-n);
  while (hi - lo >= target) {
    Rat mid = (lo + hi) / 2;
    bool decided = false;
    for (int tries = 0; !decided; ++tries) {
      int prec = n + 10;
      for (int k = 0; k < 4 && !decided; ++k, prec *= 2) {
        RatInterval e = exp_bounds(mid, prec);
        if (e.hi < x) {
          lo = mid;
          decided = true;
        } else if (e.lo > x) {
          hi = mid;
          decided = true;
        }
      }
      // shift the split point; e^mid = x cannot hold for rational mid != 0
      if (!decided) mid = lo + (hi - lo) * ratio(3 + tries % 2, 8);
      if (tries > 64) throw Error(ErrorCode::PrecisionExhausted, "log_bounds bisection stalled");
    }
  }
  return RatInterval(lo, hi);
}

// S_i(x) = sum_{j>=0} j^i x^j (with 0^0 = 1), exact.
static Rat power_series(const Rat& x, int i) {
  Rat one_minus = 1 - x;
  if (i == 0) return 1 / one_minus;
  // Eulerian numbers A(i, m)
  std::vector<BigInt> A = {BigInt(1)};
  for (int r = 2; r <= i; ++r) {
    std::vector<BigInt> B(r);
    for (int m = 0; m < r; ++m) {
      BigInt v = 0;
      if (m < static_cast<int>(A.size())) v += BigInt(m + 1) * A[m];
      if (m >= 1) v += BigInt(r - m) * A[m - 1];
      B[m] = v;
    }
    A = std::move(B);
  }
  Rat poly(0), xp(1);
  for (const auto& a : A) {
    poly += Rat(a) * xp;
    xp *= x;
  }
  return x * poly / rpow(one_minus, static_cast<unsigned long>(i + 1));
}

Rat geom_tails(const Rat& x, long N, int degree) {
  if (x <= 0 || x >= 1) throw Error(ErrorCode::RatioOutOfRange, "geometric ratio must lie in (0,1)");
  if (N < 0 || degree < 0) throw Error(ErrorCode::InvalidArgument, "geom_tails needs N >= 0, degree >= 0");
  // sum_{k>N} k^i x^k = x^{N+1} sum_{j>=0} (j + N + 1)^i x^j
  BigInt base = N + 1;
  Rat total(0);
  BigInt binom = 1;
  for (int r = 0; r <= degree; ++r) {
    if (r > 0) binom = binom * (degree - r + 1) / r;
    BigInt bp;
    mpz_pow_ui(bp.get_mpz_t(), base.get_mpz_t(), static_cast<unsigned long>(degree - r));
    total += Rat(binom * bp) * power_series(x, r);
  }
  return rpow(x, static_cast<unsigned long>(N + 1)) * total;
}

std::string to_string(const Rat& x) {
  if (x.get_den() == 1) return x.get_num().get_str();
  return x.get_num().get_str() + "/" + x.get_den().get_str();
}

Rat parse_rat(const std::string& s) {
  auto is_int = [](const std::string& t) {
    size_t i = (!t.empty() && t[0] == '-') ? 1 : 0;
    if (i >= t.size()) return false;
    for (; i < t.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(t[i]))) return false;
    return true;
  };
  auto slash = s.find('/');
  std::string a = slash == std::string::npos ? s : s.substr(0, slash);
  std::string b = slash == std::string::npos ? "1" : s.substr(slash + 1);
  if (!is_int(a) || !is_int(b) || b[0] == '-')
    throw Error(ErrorCode::ParseError, "bad rational '" + s + "'");
  BigInt num(a), den(b);
  if (den == 0) throw Error(ErrorCode::ParseError, "zero denominator in '" + s + "'");
  Rat r(num, den);
  r.canonicalize();
  return r;
}

double to_double(const Rat& x) { return x.get_d(); }

}  // namespace codedshift
