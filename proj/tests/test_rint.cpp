#include "doctest.h"

#include "codedshift/errors.hpp"
#include "codedshift/rint.hpp"
#include "gen.hpp"

using namespace codedshift;

namespace {

Rat factorial(long k) {
  BigInt f = 1;
  for (long i = 2; i <= k; ++i) f *= i;
  return Rat(f);
}

// e by its Taylor series: partial <= e <= partial + 2/(N+1)!
RatInterval e_oracle(long N) {
  Rat s = 0;
  for (long k = 0; k <= N; ++k) s += 1 / factorial(k);
  return RatInterval(s, s + 2 / factorial(N + 1));
}

// ln 2 = sum 1/(k 2^k): partial <= ln 2 <= partial + 1/((N+1) 2^N)
RatInterval ln2_oracle(long N) {
  Rat s = 0;
  for (long k = 1; k <= N; ++k) s += 1 / (Rat(k) * pow2(k));
  return RatInterval(s, s + 1 / (Rat(N + 1) * pow2(N)));
}

bool overlaps(const RatInterval& a, const RatInterval& b) { return a.lo <= b.hi && b.lo <= a.hi; }

}  // namespace

TEST_SUITE("rint") {

TEST_CASE("ratio reduces and rejects zero denominators") {
  Rat r = ratio(6, 4);
  CHECK(r == Rat(3, 2));
  CHECK(r.get_den() == 2);
  CHECK(ratio(-9, 6).get_num() == -3);
  CHECK_THROWS_AS(ratio(1, 0), Error);
}

TEST_CASE("interval operations contain pointwise results") {
  testgen::Gen g(11);
  for (int t = 0; t < 400; ++t) {
    RatInterval a = g.interval(20, 7), b = g.interval(20, 7);
    Rat x = g.inside(a), y = g.inside(b);
    CHECK((a + b).contains(x + y));
    CHECK((a - b).contains(x - y));
    CHECK((a * b).contains(x * y));
    if (b.lo > 0 || b.hi < 0) CHECK((a / b).contains(x / y));
    unsigned long k = static_cast<unsigned long>(g.range(0, 5));
    Rat p = 1;
    for (unsigned long i = 0; i < k; ++i) p *= x;
    CHECK(iv_pow(a, k).contains(p));
  }
}

TEST_CASE("division by an interval containing zero throws") {
  CHECK_THROWS_AS(RatInterval(Rat(1)) / RatInterval(Rat(-1), Rat(1)), Error);
}

TEST_CASE("exp_bounds encloses e and meets the width contract") {
  for (int n : {5, 20, 40, 64}) {
    RatInterval r = exp_bounds(Rat(1), n);
    CHECK(r.width() < pow2(-n));
    CHECK(overlaps(r, e_oracle(30)));
    CHECK(r.lo <= e_oracle(30).hi);
  }
  CHECK(exp_bounds(Rat(0), 10).contains(Rat(1)));
}

TEST_CASE("log_bounds encloses ln 2") {
  for (int n : {5, 20, 40, 64}) {
    RatInterval r = log_bounds(Rat(2), n);
    CHECK(r.width() < pow2(-n));
    RatInterval o = ln2_oracle(90);
    CHECK(r.lo <= o.hi);
    CHECK(o.lo <= r.hi);
  }
  CHECK(log_bounds(Rat(1), 10).contains(Rat(0)));
  CHECK_THROWS_AS(log_bounds(Rat(0), 10), Error);
}

TEST_CASE("exp and log are inverse on random rationals") {
  testgen::Gen g(12);
  for (int t = 0; t < 60; ++t) {
    Rat x = g.positive_rat(50, 9);
    RatInterval l = log_bounds(x, 30);
    CHECK(exp_bounds(l.lo, 30).lo <= x);
    CHECK(x <= exp_bounds(l.hi, 30).hi);
  }
}

TEST_CASE("geom_tails matches the closed forms") {
  testgen::Gen g(13);
  for (int t = 0; t < 50; ++t) {
    Rat x = ratio(BigInt(g.range(1, 9)), BigInt(10));
    long N = g.range(0, 12);
    Rat xn1 = 1;
    for (long i = 0; i <= N; ++i) xn1 *= x;
    CHECK(geom_tails(x, N, 0) == xn1 / (1 - x));
    CHECK(geom_tails(x, N, 1) == xn1 * ((N + 1) - N * x) / ((1 - x) * (1 - x)));
  }
}

TEST_CASE("geom_tails degree 2 against a long partial sum") {
  Rat x(1, 3);
  long N = 4;
  Rat s = 0, xp = 1;
  for (long k = 1; k <= 200; ++k) {
    xp *= x;
    if (k > N) s += Rat(k * k) * xp;
  }
  Rat t = geom_tails(x, N, 2);
  CHECK(s <= t);
  CHECK(t - s < pow2(-200));
}

TEST_CASE("rounding to dyadic grids") {
  testgen::Gen g(14);
  for (int t = 0; t < 300; ++t) {
    Rat x = g.rat(1000, 999);
    long b = g.range(0, 40);
    Rat d = round_down(x, b), u = round_up(x, b);
    CHECK(d <= x);
    CHECK(x <= u);
    CHECK(u - d <= pow2(-b));
    CHECK(mpz_scan1(d.get_den().get_mpz_t(), 0) == bit_length(d.get_den()) - 1);  // power of two
    RatInterval r = round_out(RatInterval(d, u), b);
    CHECK(r.contains(RatInterval(d, u)));
  }
}

TEST_CASE("pow_rounded encloses the exact power") {
  RatInterval a(Rat(1, 3), Rat(1, 2));
  RatInterval r = pow_rounded(a, 10, 30);
  CHECK(r.contains(iv_pow(a, 10)));
}

TEST_CASE("ceil_log2 and bit_length") {
  testgen::Gen g(15);
  for (int t = 0; t < 200; ++t) {
    Rat x = g.positive_rat(100000, 1000);
    long e = ceil_log2(x);
    CHECK(x <= pow2(e));
    CHECK(x > pow2(e - 1));
  }
  CHECK(bit_length(BigInt(1)) == 1);
  CHECK(bit_length(BigInt(255)) == 8);
}

TEST_CASE("rational text round trip") {
  testgen::Gen g(16);
  for (int t = 0; t < 200; ++t) {
    Rat x = g.rat(1000000, 999);
    CHECK(parse_rat(to_string(x)) == x);
  }
  CHECK_THROWS_AS(parse_rat("1/0"), Error);
  CHECK_THROWS_AS(parse_rat("abc"), Error);
}

}  // TEST_SUITE
