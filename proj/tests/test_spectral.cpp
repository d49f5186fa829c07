#include "doctest.h"

#include "codedshift/errors.hpp"
#include "codedshift/families.hpp"
#include "codedshift/spectral.hpp"
#include "codedshift/verejones.hpp"
#include "gen.hpp"

using namespace codedshift;

namespace {

std::shared_ptr<GeneratorSystem> full_shift() { return sgap_system({IntSet::naturals()}); }

}  // namespace

TEST_SUITE("spectral") {

TEST_CASE("full shift: lambda = 2") {
  for (int n : {4, 20, 40}) {
    RatInterval lam = solve_lambda(*full_shift(), n);
    CHECK(lam.contains(Rat(2)));
    CHECK(lam.width() < pow2(-n));
  }
}

TEST_CASE("S = {1,2}: lambda^-2 + lambda^-3 = 1 bracketed exactly") {
  auto sys = sgap_system({IntSet::explicit_values({1, 2})});
  RatInterval lam = solve_lambda(*sys, 30);
  CHECK(lam.width() < pow2(-30));
  auto f = [](const Rat& l) -> Rat { return 1 / (l * l) + 1 / (l * l * l); };
  CHECK(f(lam.lo) >= 1);
  CHECK(f(lam.hi) <= 1);
}

TEST_CASE("base counterexample system: lambda = sqrt 3") {
  RatInterval lam = solve_lambda(*example51_system(), 30);
  CHECK(lam.width() < pow2(-30));
  CHECK(lam.lo * lam.lo <= 3);
  CHECK(lam.hi * lam.hi >= 3);
}

TEST_CASE("golden mean beta shift: lambda = phi") {
  auto sys = beta_system({{}, {1, 0}});
  RatInterval lam = solve_lambda(*sys, 30);
  CHECK(lam.lo * lam.lo - lam.lo - 1 <= 0);
  CHECK(lam.hi * lam.hi - lam.hi - 1 >= 0);
}

TEST_CASE("h_from_lambda of the full shift encloses ln 2") {
  RatInterval h = h_from_lambda(solve_lambda(*full_shift(), 40), 30);
  CHECK(h.width() < pow2(-30));
  RatInterval ln2 = log_bounds(Rat(2), 50);
  CHECK(h.lo <= ln2.hi);
  CHECK(ln2.lo <= h.hi);
}

TEST_CASE("char_eval brackets the characteristic sum") {
  CharEvaluation e = char_eval(*full_shift(), RatInterval(Rat(3)), 10);
  // sum_k 3^-k = 1/2
  CHECK(e.partial_value.lo <= Rat(1, 2));
  CHECK(e.partial_value.hi + e.tail_bound >= Rat(1, 2));
  CHECK_THROWS_AS(char_eval(*full_shift(), RatInterval(Rat(1)), 10), Error);
}

TEST_CASE("degenerate S = {0} has root 1") {
  auto sys = sgap_system({IntSet::explicit_values({0})});
  RatInterval h = h_lower_finite(*sys, 1, 10);
  CHECK(h == RatInterval(Rat(0)));
}

TEST_CASE("h_lower_finite increases with m and stays below h") {
  auto sys = example51_system();
  RatInterval h = h_from_lambda(solve_lambda(*sys, 30), 20);
  Rat prev = -1;
  for (std::size_t m = 1; m <= 16; ++m) {
    RatInterval r = h_lower_finite(*sys, m, 20);
    CHECK(r.lo >= prev);
    CHECK(r.lo <= h.hi);
    prev = r.lo;
  }
}

TEST_CASE("h_upper_search decreases towards h from above") {
  auto sys = example51_system();
  auto seq = h_upper_search(*sys, certified_kappa_oracle(*sys), 8);
  RatInterval h = h_from_lambda(solve_lambda(*sys, 30), 30);
  REQUIRE(seq.size() == 8);
  for (std::size_t i = 0; i < seq.size(); ++i) {
    CHECK(seq[i] > h.lo);
    if (i) CHECK(seq[i] <= seq[i - 1]);
  }
}

TEST_CASE("infinite system without tail control is refused") {
  auto sys = example51_modified(3, 30);
  CHECK_THROWS_AS(solve_lambda(*sys, 10), Error);
  try {
    solve_lambda(*sys, 10);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::TailNotBoundable);
  }
}

}  // TEST_SUITE

TEST_SUITE("verejones") {

TEST_CASE("full shift: kappa = sum k 2^-k = 2") {
  KappaCertificate c = kappa_certified(*full_shift(), 20);
  CHECK(c.value.contains(Rat(2)));
  CHECK(c.value.width() < pow2(-20));
  CHECK(c.tail_bound >= 0);
  CHECK(c.ratio < 1);
}

TEST_CASE("base counterexample system: kappa = 3") {
  KappaCertificate c = kappa_certified(*example51_system(), 20);
  CHECK(c.value.contains(Rat(3)));
  CHECK(c.value.width() < pow2(-20));
}

TEST_CASE("dyck: kappa = 2 with the declared lambda") {
  KappaCertificate c = kappa_certified(*dyck_system({}), 12);
  CHECK(c.value.contains(Rat(2)));
  CHECK(c.value.width() < pow2(-12));
  CHECK(c.lambda_used == RatInterval(Rat(3)));
}

TEST_CASE("finite system: kappa is the exact derivative sum at the root") {
  auto sys = sgap_system({IntSet::explicit_values({1, 2})});
  KappaCertificate c = kappa_certified(*sys, 24);
  RatInterval lam = solve_lambda(*sys, 40);
  RatInterval x = RatInterval(Rat(1)) / lam;
  RatInterval k = RatInterval(Rat(2)) * iv_pow(x, 2) + RatInterval(Rat(3)) * iv_pow(x, 3);
  CHECK(c.value.lo <= k.hi);
  CHECK(k.lo <= c.value.hi);
  CHECK(c.value.width() < pow2(-24));
}

TEST_CASE("kappa_partial grows with ell and stays below kappa") {
  auto sys = full_shift();
  RatInterval lam(Rat(2));
  Rat prev = 0;
  for (std::size_t ell = 1; ell <= 30; ++ell) {
    RatInterval p = kappa_partial(*sys, lam, ell);
    CHECK(p.lo >= prev);
    CHECK(p.hi <= 2);
    prev = p.lo;
  }
}

TEST_CASE("kappa_lower_seq is nondecreasing and below kappa") {
  auto sys = example51_system();
  auto seq = kappa_lower_seq(*sys, solve_lambda(*sys, 40), 30);
  for (std::size_t i = 0; i < seq.size(); ++i) {
    CHECK(seq[i] <= 3);
    if (i) CHECK(seq[i] >= seq[i - 1]);
  }
  CHECK(seq.back() > Rat(29, 10));
  auto one = kappa_lower_seq(*sys, solve_lambda(*sys, 40), 1);
  REQUIRE(one.size() == 1);
  CHECK(one[0] >= 0);
}

TEST_CASE("certified kappa oracle meets 2^-n") {
  auto sys = example51_system();
  auto k = certified_kappa_oracle(*sys);
  for (int n : {2, 8, 16}) CHECK(abs(k(n) - 3) < pow2(-n));
}

TEST_CASE("gap from bounded growth") {
  auto sys = example51_system();
  RatInterval lam = solve_lambda(*sys, 30);
  GapResult g = gap_epsilon_bounded(*sys, lam);
  RatInterval h = h_from_lambda(lam, 30);
  CHECK(g.eps > 0);
  CHECK(g.eps < h.lo);
  CHECK(g.r_bound * 2 > h.lo);
  // r(G) = 0 for two words per length; the bound must sit above it
  CHECK(g.r_bound >= 0);
}

TEST_CASE("gengap epsilon is a valid gap") {
  GenGapSpec s{2, {IntSet::arithmetic(1, 1), IntSet::arithmetic(1, 1)}, {{0, 1}, {1, 0}}};
  auto sys = gengap_system(s);
  RatInterval lam = solve_lambda(*sys, 20);
  Rat eps = gengap_epsilon(s, lam);
  RatInterval h = h_from_lambda(lam, 20);
  CHECK(eps > 0);
  CHECK(eps < h.lo);
  CHECK_THROWS_AS(gengap_epsilon(s, RatInterval(Rat(1, 2), Rat(3))), Error);
}

}  // TEST_SUITE
