#pragma once

#include <gmpxx.h>

#include <string>

namespace codedshift {

using Rat = mpq_class;
using BigInt = mpz_class;

// Closed rational interval [lo, hi].
struct RatInterval {
  Rat lo;
  Rat hi;

  RatInterval() = default;
  explicit RatInterval(const Rat& x) : lo(x), hi(x) {}
  RatInterval(const Rat& l, const Rat& h);

  Rat width() const { return hi - lo; }
  Rat mid() const { return (lo + hi) / 2; }
  bool contains(const Rat& x) const { return lo <= x && x <= hi; }
  bool contains(const RatInterval& o) const { return lo <= o.lo && o.hi <= hi; }
  bool is_point() const { return lo == hi; }

  friend bool operator==(const RatInterval& a, const RatInterval& b) {
    return a.lo == b.lo && a.hi == b.hi;
  }
};

enum class ArithOp { add, sub, mul, div };

RatInterval iv_arith(const RatInterval& a, const RatInterval& b, ArithOp op);
RatInterval iv_pow(const RatInterval& a, unsigned long k);

inline RatInterval operator+(const RatInterval& a, const RatInterval& b) { return iv_arith(a, b, ArithOp::add); }
inline RatInterval operator-(const RatInterval& a, const RatInterval& b) { return iv_arith(a, b, ArithOp::sub); }
inline RatInterval operator*(const RatInterval& a, const RatInterval& b) { return iv_arith(a, b, ArithOp::mul); }
inline RatInterval operator/(const RatInterval& a, const RatInterval& b) { return iv_arith(a, b, ArithOp::div); }

// e^x, width < 2^-n.
RatInterval exp_bounds(const Rat& x, int n);
// ln x for x > 0, width < 2^-n.
RatInterval log_bounds(const Rat& x, int n);

// Sum_{k>N} k^degree x^k for 0 < x < 1, exact.
Rat geom_tails(const Rat& x, long N, int degree);

// a/b in lowest terms (the two-argument mpq_class constructor does not reduce).
Rat ratio(const BigInt& a, const BigInt& b);

// 2^e for any integer e.
Rat pow2(long e);
// Floor / ceiling onto the grid 2^-bits.
Rat round_down(const Rat& x, long bits);
Rat round_up(const Rat& x, long bits);
RatInterval round_out(const RatInterval& a, long bits);
// [lo^k, hi^k] for 0 <= lo, rounded outward to 2^-bits after each product.
RatInterval pow_rounded(const RatInterval& a, unsigned long k, long bits);

// Smallest integer e with x <= 2^e (x > 0).
long ceil_log2(const Rat& x);
// bit length of |z|
long bit_length(const BigInt& z);

std::string to_string(const Rat& x);
Rat parse_rat(const std::string& s);
double to_double(const Rat& x);

}  // namespace codedshift
