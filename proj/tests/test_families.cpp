#include "doctest.h"

#include <map>
#include <set>

#include "codedshift/errors.hpp"
#include "codedshift/families.hpp"
#include "codedshift/spectral.hpp"
#include "gen.hpp"

using namespace codedshift;

namespace {

std::vector<std::string> first_digits(const GeneratorSystem& s, std::size_t k) {
  std::vector<std::string> out;
  for (std::size_t i = 1; i <= k; ++i) out.push_back(word_to_digits(s.generator(i)));
  return out;
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::InvalidArgument;
}

// every member of length n is factor closed and extends both ways
void check_factorial_extendable(const LanguageOracle& lang, int n) {
  int d = lang.alphabet_size();
  for (const Word& w : lang.enumerate_level(n)) {
    CHECK(lang.member(w.substr(1)));
    CHECK(lang.member(w.substr(0, w.size() - 1)));
    bool right = false, left = false;
    for (int a = 0; a < d; ++a) {
      right = right || lang.member(w + to_char(a));
      left = left || lang.member(Word(1, to_char(a)) + w);
    }
    CHECK(right);
    CHECK(left);
  }
}

bool balanced(const Word& w) {
  std::vector<int> st;
  for (char c : w) {
    int s = sym(c);
    if (dyck::is_open(s)) {
      st.push_back(s);
    } else {
      if (st.empty() || dyck::partner(st.back()) != s) return false;
      st.pop_back();
    }
  }
  return st.empty();
}

}  // namespace

TEST_SUITE("families") {

TEST_CASE("sgap generators") {
  auto full = sgap_system({IntSet::naturals()});
  CHECK(first_digits(*full, 4) == std::vector<std::string>{"1", "01", "001", "0001"});
  CHECK(full->tail_control().kind == TailControl::Kind::BoundedGrowth);
  auto fin = sgap_system({IntSet::explicit_values({1, 2})});
  CHECK(first_digits(*fin, 2) == std::vector<std::string>{"01", "001"});
  CHECK_FALSE(fin->try_generator(3).has_value());
  CHECK(code_of([] { sgap_system({IntSet::explicit_values({})}); }) == ErrorCode::EmptyS);
}

TEST_CASE("sgap language is factorial and extendable for random S") {
  testgen::Gen g(31);
  for (int t = 0; t < 8; ++t) {
    std::vector<long> vals;
    for (long s = 0; s <= 5; ++s)
      if (g.coin()) vals.push_back(s);
    if (vals.empty()) vals.push_back(g.range(0, 5));
    IntSet S = g.coin() ? IntSet::explicit_values(vals) : IntSet::cofinite(vals);
    auto lang = sgap_language({S});
    for (int n = 1; n <= 8; ++n) check_factorial_extendable(*lang, n);
  }
}

TEST_CASE("sgap language on S = {1, 2}") {
  auto lang = sgap_language({IntSet::explicit_values({1, 2})});
  CHECK(lang->member(word_from_digits("01001")));
  CHECK_FALSE(lang->member(word_from_digits("11")));
  CHECK_FALSE(lang->member(word_from_digits("10001")));
  CHECK(lang->member(word_from_digits("00")));
  CHECK_FALSE(lang->member(word_from_digits("000")));
}

TEST_CASE("gengap with d = 1 is the S-gap shift") {
  IntSet S = IntSet::arithmetic(1, 2);
  auto a = gengap_system({1, {S}, {{0}}});
  auto b = sgap_system({S});
  for (std::size_t i = 1; i <= 20; ++i) {
    Word ga = a->generator(i), gb = b->generator(i);
    CHECK(ga == gb);
  }
}

TEST_CASE("gengap d = 2 matches brute force over (pi, s)") {
  IntSet S = IntSet::explicit_values({1, 2, 3});
  GenGapSpec spec{2, {S, S}, {{0, 1}, {1, 0}}};
  auto sys = gengap_system(spec);
  std::map<long, std::set<Word>> brute;
  for (const auto& pi : spec.Pi)
    for (long s0 : {1, 2, 3})
      for (long s1 : {1, 2, 3}) {
        long s[2] = {s0, s1};
        Word w;
        for (int j : pi) w += Word(static_cast<std::size_t>(s[j]), to_char(j));
        w += to_char(2);
        brute[static_cast<long>(w.size())].insert(w);
      }
  for (long L = 1; L <= 7; ++L) {
    auto gl = sys->generators_of_length(L);
    std::set<Word> got(gl.begin(), gl.end());
    CHECK(got.size() == gl.size());
    CHECK(got == brute[L]);
  }
}

TEST_CASE("gengap duplicate words are rejected") {
  IntSet S = IntSet::explicit_values({0, 1});
  CHECK(code_of([&] { gengap_system({2, {S, S}, {{0, 1}, {1, 0}}}); }) == ErrorCode::DuplicateGenerator);
  CHECK(code_of([&] { gengap_system({2, {S, S}, {{0, 0}}}); }) == ErrorCode::InvalidPermutation);
}

TEST_CASE("gengap counts obey d! n^(d-1)") {
  IntSet N = IntSet::arithmetic(1, 1);
  auto sys = gengap_system({3, {N, N, N}, {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}});
  auto c = sys->counts_up_to(14);
  for (long n = 1; n <= 14; ++n) CHECK(c[n] <= 6 * n * n);
  CHECK(validate_oracle_prefix(*sys, 300).ok);
}

TEST_CASE("golden mean beta shift generators") {
  auto sys = beta_system({{}, {1, 0}});
  CHECK(first_digits(*sys, 4) == std::vector<std::string>{"0", "100", "10100", "1010100"});
  CHECK(sys->tail_control().kind == TailControl::Kind::BoundedGrowth);
}

TEST_CASE("beta shift with expansion (210)^inf") {
  auto sys = beta_system({{}, {2, 1, 0}});
  CHECK(first_digits(*sys, 3) == std::vector<std::string>{"0", "1", "20"});
  CHECK(sys->generators_of_length(3).empty());
  CHECK(code_of([] { beta_system({{}, {1, 2}}); }) == ErrorCode::NotQuasiGreedy);
}

TEST_CASE("beta language: generators are members and members extend") {
  BetaSpec spec{{}, {1, 0}};
  auto sys = beta_system(spec);
  auto lang = beta_language(spec);
  for (std::size_t i = 1; i <= 5; ++i) CHECK(lang->member(sys->generator(i)));
  for (int n = 1; n <= 8; ++n)
    for (const Word& w : lang->enumerate_level(n))
      CHECK((lang->member(w + to_char(0)) || lang->member(w + to_char(1))));
  CHECK_FALSE(lang->member(word_from_digits("11")));
}

TEST_CASE("beta_recover round trips") {
  testgen::Gen g(32);
  std::vector<BetaSpec> specs{{{}, {1, 0}}, {{}, {2, 1, 0}}, {{2}, {1}}, {{1}, {1, 0}}};
  for (const auto& spec : specs) {
    auto sys = beta_system(spec);
    BetaRecovery r = beta_recover(*sys, 6, 16);
    for (int k = 1; k <= 6; ++k) CHECK(r.digits[k - 1] == spec.digit(k));
  }
  BetaRecovery gold = beta_recover(*beta_system({{}, {1, 0}}), 6, 20);
  CHECK(gold.digits == std::vector<int>{1, 0, 1, 0, 1, 0});
  CHECK(gold.beta.lo * gold.beta.lo - gold.beta.lo - 1 <= 0);
  CHECK(gold.beta.hi * gold.beta.hi - gold.beta.hi - 1 >= 0);
  BetaRecovery one = beta_recover(*beta_system({{}, {1, 0}}), 1, 20);
  CHECK(one.digits == std::vector<int>{1});
  CHECK(code_of([] { beta_recover(*sgap_system({IntSet::naturals()}), 4); }) == ErrorCode::ShapeMismatch);
}

TEST_CASE("dyck generators and counts") {
  auto sys = dyck_system({DyckVariant::OpenAugmented});
  CHECK(dyck::to_brackets(sys->generator(1)) == "(");
  CHECK(dyck::to_brackets(sys->generator(2)) == "[");
  auto close = dyck_system({DyckVariant::CloseAugmented});
  CHECK(dyck::to_brackets(close->generator(1)) == ")");
  CHECK(sys->generators_of_length(2).size() == 2);
  std::set<std::string> w2;
  for (const auto& w : sys->generators_of_length(4)) w2.insert(dyck::to_brackets(w));
  CHECK(w2 == std::set<std::string>{"(())", "([])", "[()]", "[[]]"});
  // |W_n| against brute force: balanced, outermost pair matching
  for (long n = 1; n <= 5; ++n) {
    std::size_t brute = 0;
    Word w(static_cast<std::size_t>(2 * n), '\0');
    long total = 1L << (4 * n);
    for (long code = 0; code < total; ++code) {
      for (long k = 0; k < 2 * n; ++k) w[k] = to_char(static_cast<int>((code >> (2 * k)) & 3));
      if (!dyck::is_open(sym(w[0])) || !balanced(w)) continue;
      if (!balanced(w.substr(1, w.size() - 2))) continue;
      ++brute;
    }
    CHECK(sys->generators_of_length(2 * n).size() == brute);
  }
}

TEST_CASE("dyck language") {
  auto lang = dyck_language();
  CHECK_FALSE(lang->member(dyck::from_brackets("([)")));
  CHECK(lang->member(dyck::from_brackets(")(")));
  CHECK(lang->member(dyck::from_brackets("])([")));
  CHECK_FALSE(lang->member(dyck::from_brackets("(]")));
  for (int n = 1; n <= 5; ++n) check_factorial_extendable(*lang, n);
}

TEST_CASE("dyck closed forms obey exact identities at x = 1/3") {
  auto sys = dyck_system({});
  auto s = sys->exact_series(Rat(1, 3));
  REQUIRE(s);
  const Word o = dyck::from_brackets("("), q = dyck::from_brackets("[");
  // characteristic equation: total weight 1
  CHECK(s->pre(o) + s->pre(q) == 1);
  Rat suf = 0, inner = 0;
  for (int a = 0; a < 4; ++a) {
    suf += s->suf(Word(1, to_char(a)));
    inner += s->inner(Word(1, to_char(a)));
  }
  CHECK(suf == 1);
  CHECK(inner == 2);  // kappa
  // pre(v) = [v in G] x^|v| + sum_a pre(v a)
  testgen::Gen g(33);
  auto lang = dyck_language();
  for (int t = 0; t < 200; ++t) {
    Word v = g.word(4, g.range(1, 7));
    if (!lang->member(v)) continue;
    Rat rhs = 0, rhs2 = 0;
    for (int a = 0; a < 4; ++a) {
      rhs += s->pre(v + to_char(a));
      rhs2 += s->suf(Word(1, to_char(a)) + v);
    }
    Rat self = sys->is_generator(v) ? Rat(1, 1) : Rat(0);
    for (std::size_t i = 0; i < v.size(); ++i) self /= 3;
    CHECK(s->pre(v) == self + rhs);
    CHECK(s->suf(v) == self + rhs2);
  }
  CHECK_FALSE(sys->exact_series(Rat(1, 2)));
}

TEST_CASE("dyck closed forms dominate truncated sums") {
  auto sys = dyck_system({}, 16);
  auto s = sys->exact_series(Rat(1, 3));
  std::size_t count = sys->count_up_to_length(16);
  for (std::string b : {"(", "((", "()", ")", "))", "([", "(()", ")(", "]"}) {
    Word w = dyck::from_brackets(b);
    Rat pre = 0, suf = 0, inn = 0;
    for (std::size_t i = 1; i <= count; ++i) {
      const Word& gw = sys->generator(i);
      Rat p = 1;
      for (std::size_t k = 0; k < gw.size(); ++k) p /= 3;
      if (gw.size() >= w.size() && gw.compare(0, w.size(), w) == 0) pre += p;
      if (gw.size() >= w.size() && gw.compare(gw.size() - w.size(), w.size(), w) == 0) suf += p;
      inn += p * static_cast<long>(occurrences(w, gw).size());
    }
    CHECK(pre <= s->pre(w));
    CHECK(suf <= s->suf(w));
    CHECK(inn <= s->inner(w));
    CHECK(s->pre(w) - pre < Rat(1, 4));
  }
}

TEST_CASE("counterexample base system") {
  auto sys = example51_system();
  CHECK(first_digits(*sys, 4) == std::vector<std::string>{"01", "02", "0111", "0222"});
  auto c = sys->counts_up_to(20);
  for (long k = 1; k <= 20; ++k) CHECK(c[k] == (k % 2 == 0 ? 2 : 0));
  auto decl = sys->declared();
  CHECK(decl.at("kappa").value == RatInterval(Rat(3)));
  CHECK(decl.at("lambda").value.contains(RatInterval(Rat(1732050808, 1000000000))));
}

TEST_CASE("counterexample modified counts") {
  for (long N : {3L, 5L}) {
    auto sys = example51_modified(N, 2 * (2 * N + 6));
    auto c = sys->counts_up_to(2 * (N + 6));
    for (long n = 1; n <= N + 6; ++n) {
      BigInt expect = 2;
      if (n > N) {
        BigInt p = 1;
        for (long i = 0; i < n - N - 1; ++i) p *= 3;
        expect += 2 * p;
      }
      CHECK(c[2 * n] == expect);
      CHECK(c[2 * n - 1] == 0);
    }
  }
  auto m3 = example51_modified(3, 20);
  CHECK(m3->counts_up_to(8)[8] == 4);
  std::set<std::string> long8;
  for (const auto& w : m3->generators_of_length(8)) long8.insert(word_to_digits(w));
  CHECK(long8 == std::set<std::string>{"01101022", "01102022", "01111111", "02222222"});
  CHECK(code_of([] { example51_modified(4); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([&] { m3->generator(m3->count_up_to_length(20) + 1); }) == ErrorCode::BudgetExceeded);
}

TEST_CASE("every family passes oracle prefix validation") {
  std::vector<std::shared_ptr<GeneratorSystem>> systems{
      sgap_system({IntSet::naturals()}),
      sgap_system({IntSet::arithmetic(2, 3)}),
      gengap_system({2, {IntSet::arithmetic(1, 1), IntSet::arithmetic(1, 1)}, {{0, 1}, {1, 0}}}),
      beta_system({{}, {1, 0}}),
      beta_system({{}, {2, 1, 0}}),
      dyck_system({}, 14),
      example51_system(),
  };
  for (const auto& s : systems) {
    std::size_t cap = 500;
    if (s->name().find("dyck") != std::string::npos) cap = s->count_up_to_length(14);
    CHECK(validate_oracle_prefix(*s, cap).ok);
  }
}

TEST_CASE("separation demo") {
  DemoReport r = kappa_separation_demo(std::nullopt, 10);
  CHECK(r.N0 == 5);
  CHECK(r.gate.lo > Rat(7, 2));
  CHECK(r.kappa_base.value.contains(Rat(3)));
  CHECK(r.separated);
  CHECK(r.separation_lower >= Rat(1, 2));
  CHECK(r.generators_agree >= 4);
  CHECK(r.levels_agree >= r.N0);
  // gate failure for N0 = 3 carries the certified value
  CHECK(code_of([] { kappa_separation_demo(3L, 10); }) == ErrorCode::GateNotSatisfied);
}

}  // TEST_SUITE
