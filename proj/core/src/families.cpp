#include "codedshift/families.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <map>
#include <mutex>
#include <numeric>
#include <set>

#include "codedshift/budget.hpp"
#include "codedshift/errors.hpp"
#include "codedshift/spectral.hpp"

namespace codedshift {

namespace {

Word run(int s, long len) { return Word(static_cast<std::size_t>(len), to_char(s)); }

BigInt factorial(long d) {
  BigInt f = 1;
  for (long i = 2; i <= d; ++i) f *= i;
  return f;
}

// ---------------------------------------------------------------- S-gap

class SGapSystem : public ByLengthSystem {
 public:
  explicit SGapSystem(SGapSpec spec) : ByLengthSystem(2), spec_(std::move(spec)) {
    if (spec_.S.empty()) throw Error(ErrorCode::EmptyS, "S is empty");
  }
  std::string name() const override { return "sgap(S=" + spec_.S.describe() + ")"; }
  TailControl tail_control() const override {
    if (spec_.S.is_finite())
      return TailControl::finite(BigInt(static_cast<unsigned long>(spec_.S.elements_up_to(*spec_.S.max()).size())));
    return TailControl::bounded(1);
  }
  std::vector<BigInt> counts_up_to(long K) const override {
    std::vector<BigInt> c(static_cast<std::size_t>(K + 1), BigInt(0));
    for (long k = 1; k <= K; ++k)
      if (spec_.S.contains(k - 1)) c[k] = 1;
    return c;
  }

 protected:
  std::vector<Word> words_of_length(long k) override {
    if (spec_.S.contains(k - 1)) return {run(0, k - 1) + to_char(1)};
    return {};
  }
  long last_length() const override { return spec_.S.is_finite() ? *spec_.S.max() + 1 : -1; }
  std::optional<bool> decide_generator(const Word& w) const override {
    if (w.empty() || sym(w.back()) != 1) return false;
    for (std::size_t i = 0; i + 1 < w.size(); ++i)
      if (sym(w[i]) != 0) return false;
    return spec_.S.contains(static_cast<long>(w.size()) - 1);
  }

 private:
  SGapSpec spec_;
};

class SGapLanguage : public LanguageOracle {
 public:
  explicit SGapLanguage(SGapSpec spec) : spec_(std::move(spec)) {}
  int alphabet_size() const override { return 2; }
  bool member(const Word& w) const override {
    if (!word_over_alphabet(w, 2)) return false;
    const IntSet& S = spec_.S;
    std::vector<long> ones;
    for (std::size_t i = 0; i < w.size(); ++i)
      if (sym(w[i]) == 1) ones.push_back(static_cast<long>(i));
    if (ones.empty()) return S.next_at_least(static_cast<long>(w.size())).has_value();
    if (!S.next_at_least(ones.front())) return false;
    for (std::size_t j = 0; j + 1 < ones.size(); ++j)
      if (!S.contains(ones[j + 1] - ones[j] - 1)) return false;
    return S.next_at_least(static_cast<long>(w.size()) - ones.back() - 1).has_value();
  }

 private:
  SGapSpec spec_;
};

// ---------------------------------------------------------------- generalized gap

std::string tuple_str(const std::vector<int>& pi, const std::vector<long>& s) {
  std::string r = "(pi=[";
  for (std::size_t i = 0; i < pi.size(); ++i) r += (i ? "," : "") + std::to_string(pi[i]);
  r += "], s=[";
  for (std::size_t i = 0; i < s.size(); ++i) r += (i ? "," : "") + std::to_string(s[i]);
  return r + "])";
}

Word gengap_word(int d, const std::vector<int>& pi, const std::vector<long>& s) {
  Word w;
  for (int j : pi) w += run(j, s[j]);
  return w + to_char(d);
}

void validate_gengap(const GenGapSpec& spec) {
  if (spec.d < 1 || spec.d > 12) throw Error(ErrorCode::InvalidArgument, "gengap needs 1 <= d <= 12");
  if (static_cast<int>(spec.S.size()) != spec.d)
    throw Error(ErrorCode::InvalidArgument, "gengap needs exactly d integer sets");
  for (int j = 0; j < spec.d; ++j)
    if (spec.S[j].empty()) throw Error(ErrorCode::EmptyS, "S_" + std::to_string(j) + " is empty");
  if (spec.Pi.empty()) throw Error(ErrorCode::InvalidPermutation, "Pi is empty");
  std::set<std::vector<int>> seen;
  for (const auto& p : spec.Pi) {
    std::vector<int> q = p;
    std::sort(q.begin(), q.end());
    std::vector<int> id(spec.d);
    std::iota(id.begin(), id.end(), 0);
    if (q != id) throw Error(ErrorCode::InvalidPermutation, "not a permutation of 0..d-1");
    if (!seen.insert(p).second) throw Error(ErrorCode::InvalidPermutation, "duplicate permutation in Pi");
  }
  // Two tuples give the same word iff the permutations order the symbols with
  // positive exponent identically and all other exponents can be zero.
  for (std::size_t a = 0; a < spec.Pi.size(); ++a)
    for (std::size_t b = a + 1; b < spec.Pi.size(); ++b)
      for (unsigned J = 0; J < (1u << spec.d); ++J) {
        bool ok = true;
        std::vector<long> s(spec.d, 0);
        for (int j = 0; j < spec.d && ok; ++j) {
          if (J >> j & 1u) {
            auto v = spec.S[j].next_at_least(1);
            if (!v) ok = false;
            else s[j] = *v;
          } else if (!spec.S[j].contains(0)) {
            ok = false;
          }
        }
        if (!ok) continue;
        std::vector<int> ra, rb;
        for (int x : spec.Pi[a])
          if (J >> x & 1u) ra.push_back(x);
        for (int x : spec.Pi[b])
          if (J >> x & 1u) rb.push_back(x);
        if (ra != rb) continue;
        throw Error(ErrorCode::DuplicateGenerator,
                    "tuples " + tuple_str(spec.Pi[a], s) + " and " + tuple_str(spec.Pi[b], s) +
                        " give the same word '" + word_to_digits(gengap_word(spec.d, spec.Pi[a], s)) + "'");
      }
}

class GenGapSystem : public ByLengthSystem {
 public:
  explicit GenGapSystem(GenGapSpec spec) : ByLengthSystem(spec.d + 1), spec_(std::move(spec)) {
    validate_gengap(spec_);
    finite_ = std::all_of(spec_.S.begin(), spec_.S.end(), [](const IntSet& s) { return s.is_finite(); });
    if (finite_) {
      long L = 1;
      for (const auto& s : spec_.S) L += *s.max();
      last_ = L;
      auto c = counts_up_to(L);
      for (long k = 1; k <= L; ++k) total_ += c[k];
    }
  }
  std::string name() const override { return "gengap(d=" + std::to_string(spec_.d) + ")"; }
  TailControl tail_control() const override {
    if (finite_) return TailControl::finite(total_);
    std::lock_guard lk(tc_mu_);
    if (eps_) return TailControl::gap(*eps_);
    return TailControl::polynomial(factorial(spec_.d).get_si(), spec_.d - 1);
  }
  void set_gap(const Rat& eps) {
    std::lock_guard lk(tc_mu_);
    eps_ = eps;
  }
  std::vector<BigInt> counts_up_to(long K) const override {
    // number of exponent vectors with sum k-1, times |Pi| (no collisions after validation)
    std::lock_guard lk(count_mu_);
    if (static_cast<long>(conv_.size()) < K) {
      long M = std::max<long>(K, 2 * static_cast<long>(conv_.size()));
      std::vector<BigInt> cur(static_cast<std::size_t>(M), BigInt(0));
      cur[0] = 1;
      for (const auto& S : spec_.S) {
        std::vector<BigInt> nxt(static_cast<std::size_t>(M), BigInt(0));
        auto el = S.elements_up_to(M - 1);
        for (long m = 0; m < M; ++m)
          for (long s : el) {
            if (s > m) break;
            nxt[m] += cur[m - s];
          }
        cur.swap(nxt);
      }
      conv_ = std::move(cur);
    }
    std::vector<BigInt> c(static_cast<std::size_t>(K + 1), BigInt(0));
    BigInt np = static_cast<unsigned long>(spec_.Pi.size());
    for (long k = 1; k <= K; ++k) c[k] = conv_[k - 1] * np;
    return c;
  }
  const GenGapSpec& spec() const { return spec_; }

 protected:
  std::vector<Word> words_of_length(long L) override {
    std::vector<std::pair<Word, std::size_t>> out;
    std::vector<long> s(spec_.d, 0);
    std::vector<std::vector<long>> vecs;
    rec(0, L - 1, s, vecs);
    for (const auto& v : vecs)
      for (std::size_t p = 0; p < spec_.Pi.size(); ++p) out.emplace_back(gengap_word(spec_.d, spec_.Pi[p], v), p);
    std::sort(out.begin(), out.end());
    std::vector<Word> words;
    for (auto& [w, p] : out) words.push_back(std::move(w));
    return words;
  }
  long last_length() const override { return finite_ ? last_ : -1; }
  std::optional<bool> decide_generator(const Word& w) const override;

 private:
  void rec(int j, long rem, std::vector<long>& s, std::vector<std::vector<long>>& out) const {
    if (j == spec_.d - 1) {
      if (spec_.S[j].contains(rem)) {
        s[j] = rem;
        out.push_back(s);
      }
      return;
    }
    for (long v : spec_.S[j].elements_up_to(rem)) {
      s[j] = v;
      rec(j + 1, rem - v, s, out);
    }
  }

  GenGapSpec spec_;
  bool finite_ = false;
  long last_ = -1;
  BigInt total_ = 0;
  mutable std::mutex tc_mu_;
  std::optional<Rat> eps_;
  mutable std::mutex count_mu_;
  mutable std::vector<BigInt> conv_;
};

struct Runs {
  std::vector<int> sym;
  std::vector<long> len;
};

Runs runs_of(const Word& w, std::size_t a, std::size_t b) {
  Runs r;
  for (std::size_t i = a; i < b; ++i) {
    int s = sym(w[i]);
    if (!r.sym.empty() && r.sym.back() == s)
      ++r.len.back();
    else {
      r.sym.push_back(s);
      r.len.push_back(1);
    }
  }
  return r;
}

// Is the block (runs) a piece of a body pi(0)^s... ? first/last runs may be partial
// when the corresponding end is open.
bool body_piece(const GenGapSpec& spec, const std::vector<int>& pi, const Runs& r, bool open_left,
                bool open_right) {
  std::vector<int> pos(spec.d);
  for (int i = 0; i < spec.d; ++i) pos[pi[i]] = i;
  const std::size_t m = r.sym.size();
  int lo = 0, hi = spec.d - 1;  // absent symbols in [lo, hi] of pi must allow 0
  if (m == 0) {
    if (open_left || open_right) return true;
    for (int j = 0; j < spec.d; ++j)
      if (!spec.S[j].contains(0)) return false;
    return true;
  }
  for (std::size_t i = 0; i < m; ++i) {
    if (r.sym[i] >= spec.d) return false;
    if (i > 0 && pos[r.sym[i]] <= pos[r.sym[i - 1]]) return false;
    const IntSet& S = spec.S[r.sym[i]];
    bool partial = (i == 0 && open_left) || (i + 1 == m && open_right);
    if (partial) {
      if (!S.next_at_least(r.len[i])) return false;
    } else if (!S.contains(r.len[i])) {
      return false;
    }
  }
  if (open_left) lo = pos[r.sym.front()];
  if (open_right) hi = pos[r.sym.back()];
  std::vector<char> present(spec.d, 0);
  for (int s : r.sym) present[s] = 1;
  for (int p = lo; p <= hi; ++p)
    if (!present[pi[p]] && !spec.S[pi[p]].contains(0)) return false;
  return true;
}

class GenGapLanguage : public LanguageOracle {
 public:
  explicit GenGapLanguage(GenGapSpec spec) : spec_(std::move(spec)) { validate_gengap(spec_); }
  int alphabet_size() const override { return spec_.d + 1; }
  bool member(const Word& w) const override {
    if (!word_over_alphabet(w, spec_.d + 1)) return false;
    std::vector<std::size_t> term;
    for (std::size_t i = 0; i < w.size(); ++i)
      if (sym(w[i]) == spec_.d) term.push_back(i);
    auto any_pi = [&](const Runs& r, bool l, bool rt) {
      for (const auto& pi : spec_.Pi)
        if (body_piece(spec_, pi, r, l, rt)) return true;
      return false;
    };
    if (term.empty()) return any_pi(runs_of(w, 0, w.size()), true, true);
    if (!any_pi(runs_of(w, 0, term.front()), true, false)) return false;
    for (std::size_t j = 0; j + 1 < term.size(); ++j)
      if (!any_pi(runs_of(w, term[j] + 1, term[j + 1]), false, false)) return false;
    return any_pi(runs_of(w, term.back() + 1, w.size()), false, true);
  }

 private:
  GenGapSpec spec_;
};

std::optional<bool> GenGapSystem::decide_generator(const Word& w) const {
  if (w.empty() || sym(w.back()) != spec_.d) return false;
  Runs r = runs_of(w, 0, w.size() - 1);
  for (const auto& pi : spec_.Pi)
    if (body_piece(spec_, pi, r, false, false)) return true;
  return false;
}

// ---------------------------------------------------------------- beta

void validate_beta(const BetaSpec& b) {
  if (b.period.empty()) throw Error(ErrorCode::NotQuasiGreedy, "empty period");
  for (int x : b.preperiod)
    if (x < 0) throw Error(ErrorCode::NotQuasiGreedy, "negative digit");
  for (int x : b.period)
    if (x < 0) throw Error(ErrorCode::NotQuasiGreedy, "negative digit");
  if (b.digit(1) < 1) throw Error(ErrorCode::NotQuasiGreedy, "eps_1 must be >= 1");
  if (b.digit(1) + 1 > kMaxAlphabet) throw Error(ErrorCode::InvalidArgument, "alphabet too large");
  if (std::all_of(b.period.begin(), b.period.end(), [](int x) { return x == 0; }))
    throw Error(ErrorCode::NotQuasiGreedy, "quasi-greedy expansions do not end in 0^inf");
  const long P = static_cast<long>(b.preperiod.size()), Q = static_cast<long>(b.period.size());
  // both sequences are periodic from index P with period Q, so P+Q digits decide the order
  for (long k = 1; k < P + Q; ++k) {
    for (long j = 1; j <= P + Q; ++j) {
      int a = b.digit(j + k), e = b.digit(j);
      if (a < e) break;
      if (a > e)
        throw Error(ErrorCode::NotQuasiGreedy,
                    "shift by " + std::to_string(k) + " exceeds the expansion at digit " + std::to_string(j));
    }
  }
}

class BetaSystem : public ByLengthSystem {
 public:
  explicit BetaSystem(BetaSpec spec) : ByLengthSystem(spec.digit(1) + 1), spec_(std::move(spec)) {}
  std::string name() const override { return "beta"; }
  TailControl tail_control() const override { return TailControl::bounded(spec_.digit(1)); }
  std::vector<BigInt> counts_up_to(long K) const override {
    std::vector<BigInt> c(static_cast<std::size_t>(K + 1), BigInt(0));
    for (long k = 1; k <= K; ++k) c[k] = spec_.digit(k);
    return c;
  }

 protected:
  std::vector<Word> words_of_length(long L) override {
    Word pre;
    for (long j = 1; j < L; ++j) pre += to_char(spec_.digit(j));
    std::vector<Word> out;
    for (int i = 0; i < spec_.digit(L); ++i) out.push_back(pre + to_char(i));
    return out;
  }
  std::optional<bool> decide_generator(const Word& w) const override {
    if (w.empty()) return false;
    long L = static_cast<long>(w.size());
    for (long j = 1; j < L; ++j)
      if (sym(w[j - 1]) != spec_.digit(j)) return false;
    return sym(w.back()) < spec_.digit(L);
  }

 private:
  BetaSpec spec_;
};

class BetaLanguage : public LanguageOracle {
 public:
  explicit BetaLanguage(BetaSpec spec) : spec_(std::move(spec)) {}
  int alphabet_size() const override { return spec_.digit(1) + 1; }
  bool member(const Word& w) const override {
    if (!word_over_alphabet(w, alphabet_size())) return false;
    for (std::size_t k = 0; k < w.size(); ++k)
      for (std::size_t j = k; j < w.size(); ++j) {
        int a = sym(w[j]), e = spec_.digit(static_cast<long>(j - k) + 1);
        if (a < e) break;
        if (a > e) return false;
      }
    return true;
  }

 private:
  BetaSpec spec_;
};

// ---------------------------------------------------------------- Dyck

void balanced_words(long len, Word& cur, std::vector<int>& stack, std::vector<Word>& out) {
  long rem = len - static_cast<long>(cur.size());
  if (rem == 0) {
    out.push_back(cur);
    return;
  }
  for (int s = 0; s < 4; ++s) {
    if (dyck::is_open(s)) {
      if (static_cast<long>(stack.size()) + 1 > rem - 1) continue;
      stack.push_back(s);
      cur.push_back(to_char(s));
      balanced_words(len, cur, stack, out);
      cur.pop_back();
      stack.pop_back();
    } else {
      if (stack.empty() || dyck::partner(stack.back()) != s) continue;
      int top = stack.back();
      stack.pop_back();
      cur.push_back(to_char(s));
      balanced_words(len, cur, stack, out);
      cur.pop_back();
      stack.push_back(top);
    }
  }
}

BigInt catalan(long n) {
  BigInt c;
  mpz_bin_uiui(c.get_mpz_t(), static_cast<unsigned long>(2 * n), static_cast<unsigned long>(n));
  return c / (n + 1);
}

bool dyck_single(DyckVariant v, int s) {
  return v == DyckVariant::OpenAugmented ? dyck::is_open(s) : !dyck::is_open(s);
}

Word mirror(const Word& w) {
  Word r(w.rbegin(), w.rend());
  for (auto& c : r) c = to_char(dyck::partner(sym(c)));
  return r;
}

// closed forms at x = 1/3, where the balanced-word series equals 3/2
class DyckSeries : public ExactSeries {
 public:
  explicit DyckSeries(DyckVariant v) : v_(v) {}

  static Rat xpow(std::size_t k) {
    BigInt den;
    mpz_ui_pow_ui(den.get_mpz_t(), 3, k);
    return Rat(BigInt(1), den);
  }

  // sum of 3^-|g| over irreducible balanced g starting with v
  static Rat pre_w(const Word& v) {
    if (v.empty() || !dyck::is_open(sym(v[0]))) return 0;
    std::vector<int> st;
    for (std::size_t i = 0; i < v.size(); ++i) {
      int s = sym(v[i]);
      if (dyck::is_open(s)) {
        st.push_back(s);
      } else {
        if (st.empty() || dyck::partner(st.back()) != s) return 0;
        st.pop_back();
      }
      if (st.empty() && i + 1 < v.size()) return 0;
    }
    return xpow(v.size()) * pow2(-static_cast<long>(st.size()));
  }

  static Rat inner_w(const Word& w) {
    std::vector<int> st;
    long j = 0, r = 0;
    long min_inner = std::numeric_limits<long>::max();
    for (std::size_t i = 0; i < w.size(); ++i) {
      int s = sym(w[i]);
      if (dyck::is_open(s)) {
        st.push_back(s);
        ++r;
      } else {
        if (st.empty()) {
          ++j;
        } else {
          if (dyck::partner(st.back()) != s) return 0;
          st.pop_back();
        }
        --r;
      }
      if (i + 1 < w.size()) min_inner = std::min(min_inner, r);
    }
    long m = static_cast<long>(st.size());
    long rmin = std::max({j, -r, 0L});
    if (min_inner != std::numeric_limits<long>::max()) rmin = std::max(rmin, 1 - min_inner);
    return xpow(w.size()) * pow2(1 - m - rmin);
  }

  Rat single(const Word& w) const {
    return (w.size() == 1 && dyck_single(v_, sym(w[0]))) ? Rat(1, 3) : Rat(0);
  }
  Rat pre(const Word& v) const override { return pre_w(v) + single(v); }
  Rat suf(const Word& u) const override { return pre_w(mirror(u)) + single(u); }
  Rat inner(const Word& w) const override { return inner_w(w) + single(w); }

 private:
  DyckVariant v_;
};

class DyckSystem : public ByLengthSystem {
 public:
  DyckSystem(DyckSpec spec, long maxlen) : ByLengthSystem(4), spec_(spec), maxlen_(maxlen) {
    if (maxlen < 1) throw Error(ErrorCode::InvalidArgument, "maxlen must be >= 1");
  }
  std::string name() const override {
    return spec_.variant == DyckVariant::OpenAugmented ? "dyck(open)" : "dyck(close)";
  }
  TailControl tail_control() const override { return TailControl::gap(Rat(1, 20)); }
  DeclaredMap declared() const override {
    return {{"lambda", {RatInterval(Rat(3)), "paper"}}, {"kappa", {RatInterval(Rat(2)), "paper"}}};
  }
  std::vector<BigInt> counts_up_to(long K) const override {
    std::vector<BigInt> c(static_cast<std::size_t>(K + 1), BigInt(0));
    if (K >= 1) c[1] = 2;
    for (long k = 2; k <= K; k += 2) {
      BigInt p2;
      mpz_ui_pow_ui(p2.get_mpz_t(), 2, static_cast<unsigned long>(k / 2));
      c[k] = p2 * catalan(k / 2 - 1);
    }
    return c;
  }
  std::optional<std::pair<Word, long>> direct_witness(const Word& w) const override {
    std::vector<int> st;
    Word prefix;
    for (char ch : w) {
      int s = sym(ch);
      if (s > 3) return std::nullopt;
      if (dyck::is_open(s)) {
        st.push_back(s);
      } else if (st.empty()) {
        prefix.insert(prefix.begin(), to_char(dyck::partner(s)));
      } else {
        if (dyck::partner(st.back()) != s) return std::nullopt;
        st.pop_back();
      }
    }
    Word suffix;
    for (auto it = st.rbegin(); it != st.rend(); ++it) suffix += to_char(dyck::partner(*it));
    return std::make_pair(prefix + w + suffix, static_cast<long>(prefix.size()));
  }
  std::shared_ptr<const ExactSeries> exact_series(const Rat& x) const override {
    if (x == Rat(1, 3)) return std::make_shared<DyckSeries>(spec_.variant);
    return nullptr;
  }

 protected:
  std::vector<Word> words_of_length(long L) override {
    if (L > maxlen_)
      throw Error(ErrorCode::BudgetExceeded, "Dyck enumeration capped at length " + std::to_string(maxlen_));
    std::vector<Word> out;
    if (L == 1) {
      for (int s = 0; s < 4; ++s)
        if (dyck_single(spec_.variant, s)) out.push_back(Word(1, to_char(s)));
      return out;
    }
    if (L % 2) return out;
    std::vector<Word> inner;
    Word cur;
    std::vector<int> st;
    balanced_words(L - 2, cur, st, inner);
    for (int o : {dyck::kOpenRound, dyck::kOpenSquare})
      for (const auto& u : inner) out.push_back(to_char(o) + u + to_char(dyck::partner(o)));
    return out;
  }
  std::optional<bool> decide_generator(const Word& w) const override {
    if (w.size() == 1) return dyck_single(spec_.variant, sym(w[0]));
    if (w.size() < 2 || !word_over_alphabet(w, 4)) return false;
    std::vector<int> st;
    for (std::size_t i = 0; i < w.size(); ++i) {
      int s = sym(w[i]);
      if (dyck::is_open(s)) {
        st.push_back(s);
      } else {
        if (st.empty() || dyck::partner(st.back()) != s) return false;
        st.pop_back();
      }
      if (st.empty() && i + 1 < w.size()) return false;
    }
    return st.empty();
  }

 private:
  DyckSpec spec_;
  long maxlen_;
};

class DyckLanguage : public LanguageOracle {
 public:
  int alphabet_size() const override { return 4; }
  bool member(const Word& w) const override {
    std::vector<int> st;
    for (char ch : w) {
      int s = sym(ch);
      if (s > 3) return false;
      if (dyck::is_open(s))
        st.push_back(s);
      else if (!st.empty()) {
        if (dyck::partner(st.back()) != s) return false;
        st.pop_back();
      }
    }
    return true;
  }
};

// ---------------------------------------------------------------- counterexample pair

// the two square-root-of-3 bounds: 1732050807^2 < 3 * 10^18 < 1732050808^2
const RatInterval kSqrt3(Rat(1732050807, 1000000000), Rat(1732050808, 1000000000));

class Example51 : public ByLengthSystem {
 public:
  Example51() : ByLengthSystem(3) {}
  std::string name() const override { return "example51"; }
  TailControl tail_control() const override { return TailControl::bounded(2); }
  DeclaredMap declared() const override {
    return {{"lambda", {kSqrt3, "paper"}}, {"kappa", {RatInterval(Rat(3)), "paper"}}};
  }
  std::vector<BigInt> counts_up_to(long K) const override {
    std::vector<BigInt> c(static_cast<std::size_t>(K + 1), BigInt(0));
    for (long k = 2; k <= K; k += 2) c[k] = 2;
    return c;
  }

 protected:
  std::vector<Word> words_of_length(long L) override {
    if (L % 2) return {};
    return {to_char(0) + run(1, L - 1), to_char(0) + run(2, L - 1)};
  }
  std::optional<bool> decide_generator(const Word& w) const override {
    if (w.size() < 2 || w.size() % 2 || sym(w[0]) != 0) return false;
    int a = sym(w[1]);
    if (a != 1 && a != 2) return false;
    return std::all_of(w.begin() + 1, w.end(), [a](char c) { return sym(c) == a; });
  }
};

// words of G+ of length 2m in lexicographic order
void gplus(long rem, Word& cur, std::vector<Word>& out) {
  if (rem == 0) {
    out.push_back(cur);
    return;
  }
  for (int a : {1, 2})
    for (long k = 2; k <= rem; k += 2) {
      std::size_t n = cur.size();
      cur += to_char(0) + run(a, k - 1);
      gplus(rem - k, cur, out);
      cur.resize(n);
    }
}

class Example51Modified : public ByLengthSystem {
 public:
  Example51Modified(long N, long cap) : ByLengthSystem(3), N_(N), cap_(cap) {
    if (N < 3 || N % 2 == 0) throw Error(ErrorCode::InvalidArgument, "N must be odd and >= 3");
  }
  std::string name() const override { return "example51_modified(N=" + std::to_string(N_) + ")"; }
  TailControl tail_control() const override { return TailControl::none(); }
  std::vector<BigInt> counts_up_to(long K) const override {
    std::vector<BigInt> c(static_cast<std::size_t>(K + 1), BigInt(0));
    for (long k = 2; k <= K; k += 2) {
      long n = k / 2;
      c[k] = 2;
      if (n > N_) {
        BigInt p;
        mpz_ui_pow_ui(p.get_mpz_t(), 3, static_cast<unsigned long>(n - N_ - 1));
        c[k] += 2 * p;
      }
    }
    return c;
  }

 protected:
  std::vector<Word> words_of_length(long L) override {
    if (L > cap_) throw Error(ErrorCode::BudgetExceeded, "modified system capped at length " + std::to_string(cap_));
    if (L % 2) return {};
    std::vector<Word> out = {to_char(0) + run(1, L - 1), to_char(0) + run(2, L - 1)};
    long m = L / 2 - N_;
    if (m >= 1) {
      std::vector<Word> inner;
      Word cur;
      gplus(2 * m, cur, inner);
      for (const auto& w : inner) out.push_back(to_char(0) + run(1, N_ - 1) + w + to_char(0) + run(2, N_ - 1));
    }
    return out;
  }

 private:
  long N_, cap_;
};

// factor language as an NFA with every state initial and final
class Example51Language : public LanguageOracle {
 public:
  explicit Example51Language(std::optional<long> N) {
    // base: A, O1, E1, O2, E2 ; "after a complete generator" is O1/O2/Q_end
    A = add();
    O[1] = add();
    E[1] = add();
    O[2] = add();
    E[2] = add();
    std::vector<int> starts = {A};
    if (N) {
      if (*N < 3 || *N % 2 == 0) throw Error(ErrorCode::InvalidArgument, "N must be odd and >= 3");
      std::vector<int> P(*N), Q(*N);
      for (long k = 0; k < *N; ++k) P[k] = add();
      int IA = add(), IO1 = add(), IE1 = add(), IO2 = add(), IE2 = add(), B = add();
      for (long k = 1; k < *N; ++k) Q[k] = add();
      starts.push_back(P[0]);
      for (long k = 0; k + 1 < *N; ++k) link(P[k], 1, P[k + 1]);
      link(P[*N - 1], 0, IA);
      link(IA, 1, IO1);
      link(IA, 2, IO2);
      link(IO1, 1, IE1);
      link(IE1, 1, IO1);
      link(IO2, 2, IE2);
      link(IE2, 2, IO2);
      for (int s : {IO1, IO2}) {
        link(s, 0, IA);
        link(s, 0, B);
      }
      link(B, 2, Q[1]);
      for (long k = 1; k + 1 < *N; ++k) link(Q[k], 2, Q[k + 1]);
      ends.push_back(Q[*N - 1]);
    }
    link(A, 1, O[1]);
    link(A, 2, O[2]);
    for (int a : {1, 2}) {
      link(O[a], a, E[a]);
      link(E[a], a, O[a]);
      ends.push_back(O[a]);
    }
    for (int e : ends)
      for (int s : starts) link(e, 0, s);
  }
  int alphabet_size() const override { return 3; }
  bool member(const Word& w) const override {
    std::vector<char> cur(delta.size(), 1), nxt(delta.size());
    for (char ch : w) {
      int a = sym(ch);
      if (a > 2) return false;
      std::fill(nxt.begin(), nxt.end(), 0);
      bool any = false;
      for (std::size_t q = 0; q < delta.size(); ++q)
        if (cur[q])
          for (int t : delta[q][a]) {
            nxt[t] = 1;
            any = true;
          }
      if (!any) return false;
      cur.swap(nxt);
    }
    return true;
  }

 private:
  int add() {
    delta.emplace_back();
    return static_cast<int>(delta.size()) - 1;
  }
  void link(int q, int a, int t) { delta[q][a].push_back(t); }

  std::vector<std::array<std::vector<int>, 3>> delta;
  std::vector<int> ends;
  int A = 0;
  int O[3] = {0, 0, 0}, E[3] = {0, 0, 0};
};

}  // namespace

// ---------------------------------------------------------------- public API

std::shared_ptr<GeneratorSystem> sgap_system(const SGapSpec& spec) { return std::make_shared<SGapSystem>(spec); }

std::shared_ptr<LanguageOracle> sgap_language(const SGapSpec& spec) {
  if (spec.S.empty()) throw Error(ErrorCode::EmptyS, "S is empty");
  return std::make_shared<SGapLanguage>(spec);
}

static Rat gengap_eps_for(const GenGapSystem& sys, const RatInterval& lambda) {
  const GenGapSpec& spec = sys.spec();
  BigInt fd = factorial(spec.d);
  long dm1 = spec.d - 1;
  auto growth = [fd, dm1](long k) {
    BigInt p;
    mpz_ui_pow_ui(p.get_mpz_t(), static_cast<unsigned long>(k), static_cast<unsigned long>(dm1));
    return BigInt(fd * p);
  };
  // (log d! + (d-1) log k)/k decreases for k >= 3, so the first success at k >= 3 persists
  return gap_epsilon_from_growth(sys, lambda, growth, 2).eps;
}

std::shared_ptr<GeneratorSystem> gengap_system(const GenGapSpec& spec) {
  auto sys = std::make_shared<GenGapSystem>(spec);
  if (!sys->is_finite()) {
    RatInterval lam = solve_lambda(*sys, 24);
    sys->set_gap(gengap_eps_for(*sys, lam));
  }
  return sys;
}

std::shared_ptr<LanguageOracle> gengap_language(const GenGapSpec& spec) {
  return std::make_shared<GenGapLanguage>(spec);
}

Rat gengap_epsilon(const GenGapSpec& spec, const RatInterval& lambda) {
  GenGapSystem sys(spec);
  return gengap_eps_for(sys, lambda);
}

int BetaSpec::digit(long k) const {
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "digits are 1-based");
  long P = static_cast<long>(preperiod.size());
  if (k <= P) return preperiod[k - 1];
  if (period.empty()) return 0;
  return period[(k - P - 1) % static_cast<long>(period.size())];
}

std::shared_ptr<GeneratorSystem> beta_system(const BetaSpec& spec) {
  validate_beta(spec);
  return std::make_shared<BetaSystem>(spec);
}

std::shared_ptr<LanguageOracle> beta_language(const BetaSpec& spec) {
  validate_beta(spec);
  return std::make_shared<BetaLanguage>(spec);
}

BetaRecovery beta_recover(const GeneratorSystem& sys, int depth, int n) {
  if (depth < 1) throw Error(ErrorCode::InvalidArgument, "depth must be >= 1");
  BetaRecovery rec;
  Word prefix;
  for (int L = 1; L <= depth; ++L) {
    std::vector<Word> g;
    try {
      g = sys.generators_of_length(L);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::BudgetExceeded) throw;
      throw Error(ErrorCode::ShapeMismatch, "generators of length " + std::to_string(L) + " unavailable");
    }
    std::vector<int> last;
    for (const auto& w : g) {
      if (w.compare(0, prefix.size(), prefix) != 0)
        throw Error(ErrorCode::ShapeMismatch,
                    "generator of length " + std::to_string(L) + " does not extend the expansion prefix");
      last.push_back(sym(w.back()));
    }
    std::sort(last.begin(), last.end());
    for (std::size_t i = 0; i < last.size(); ++i)
      if (last[i] != static_cast<int>(i))
        throw Error(ErrorCode::ShapeMismatch, "length " + std::to_string(L) + " generators are not {prefix i : i < e}");
    int e = static_cast<int>(last.size());
    if (L == 1 && e < 1) throw Error(ErrorCode::ShapeMismatch, "no length-1 generators");
    rec.digits.push_back(e);
    prefix += to_char(e);
  }
  if (depth == 1)
    rec.beta = RatInterval(Rat(rec.digits[0]), Rat(rec.digits[0] + 1));
  else
    rec.beta = solve_lambda(sys, n);  // h = log beta = log lambda*
  return rec;
}

namespace dyck {
Word from_brackets(const std::string& s) {
  Word w;
  for (char c : s) {
    switch (c) {
      case '(': w += to_char(kOpenRound); break;
      case '[': w += to_char(kOpenSquare); break;
      case ')': w += to_char(kCloseRound); break;
      case ']': w += to_char(kCloseSquare); break;
      default: throw Error(ErrorCode::ParseError, std::string("not a bracket: ") + c);
    }
  }
  return w;
}
std::string to_brackets(const Word& w) {
  static const char* m = "([)]";
  std::string s;
  for (char c : w) s += sym(c) < 4 ? m[sym(c)] : '?';
  return s;
}
}  // namespace dyck

std::shared_ptr<GeneratorSystem> dyck_system(const DyckSpec& spec, long maxlen) {
  return std::make_shared<DyckSystem>(spec, maxlen);
}

std::shared_ptr<LanguageOracle> dyck_language() { return std::make_shared<DyckLanguage>(); }

std::shared_ptr<GeneratorSystem> example51_system() { return std::make_shared<Example51>(); }

std::shared_ptr<GeneratorSystem> example51_modified(long N, long cap_length) {
  return std::make_shared<Example51Modified>(N, cap_length);
}

std::shared_ptr<LanguageOracle> example51_language(std::optional<long> N0) {
  return std::make_shared<Example51Language>(N0);
}

Rat example51_modified_char(long N0, const Rat& x) {
  Rat x2 = x * x;
  Rat p = 1;
  for (long i = 0; i < N0 + 1; ++i) p *= x2;
  return 2 * x2 / (1 - x2) + 2 * p / (1 - 3 * x2);
}

Rat example51_gate(const Rat& x) {
  Rat u = 1 - x * x;
  return 4 * x * x / (u * u) + 1 / (2 * u);
}

// x F'(x) for the modified characteristic sum
static Rat modified_kappa(long N0, const Rat& x) {
  Rat x2 = x * x;
  Rat p = 1;
  for (long i = 0; i < N0 + 1; ++i) p *= x2;
  Rat u = 1 - x2, v = 1 - 3 * x2;
  return 4 * x2 / (u * u) + 2 * p * (Rat(2 * N0 + 2) * v + 6 * x2) / (v * v);
}

static RatInterval modified_root(long N0, long bits) {
  Rat lo(1, 2), hi(3, 5);
  const Rat w = pow2(-bits);
  while (hi - lo >= w) {
    Rat mid = (lo + hi) / 2;
    if (3 * mid * mid >= 1) {
      hi = mid;
      continue;
    }
    Rat f = example51_modified_char(N0, mid);
    if (f == 1) return RatInterval(mid);
    if (f > 1)
      hi = mid;
    else
      lo = mid;
  }
  return RatInterval(lo, hi);
}

DemoReport kappa_separation_demo(std::optional<long> N0, int n) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "precision must be >= 1");
  const long bits = n + 24;
  std::vector<long> cands;
  if (N0) {
    if (*N0 < 3 || *N0 % 2 == 0) throw Error(ErrorCode::InvalidArgument, "N0 must be odd and >= 3");
    cands.push_back(*N0);
  } else {
    const int budget = retry_budget();
    for (long N = 3, i = 0; i <= budget; N += 2, ++i) cands.push_back(N);
  }
  DemoReport rep;
  const Rat bar(7, 2);
  std::optional<RatInterval> xr;
  for (long N : cands) {
    RatInterval x = modified_root(N, bits);
    GateAttempt at;
    at.N0 = N;
    at.gate = RatInterval(example51_gate(x.lo), example51_gate(x.hi));
    at.certified = at.gate.lo > bar;
    rep.attempts.push_back(at);
    if (at.certified) {
      rep.N0 = N;
      rep.gate = at.gate;
      xr = x;
      break;
    }
  }
  if (!xr) {
    const GateAttempt& last = rep.attempts.back();
    throw Error(ErrorCode::GateNotSatisfied,
                "N0=" + std::to_string(last.N0) + ": certified gate enclosure [" + to_string(last.gate.lo) + ", " +
                    to_string(last.gate.hi) + "] ~ " + std::to_string(last.gate.lo.get_d()) + ", needs > 7/2" +
                    (N0 ? "" : " (no admissible N0 within budget)"));
  }
  rep.x_prime = *xr;
  rep.lambda_prime = RatInterval(1 / xr->hi, 1 / xr->lo);

  auto base = example51_system();
  rep.kappa_base = kappa_certified(*base, n);
  rep.kappa_prime_lower = modified_kappa(rep.N0, xr->lo);
  rep.separation_lower = rep.kappa_prime_lower - rep.kappa_base.value.hi;
  rep.separated = rep.separation_lower >= Rat(1, 2);

  auto mod = example51_modified(rep.N0, 2 * rep.N0 + 2);
  std::size_t K = mod->count_up_to_length(2 * rep.N0 + 2);
  rep.generators_compared = K;
  std::size_t M = 0;
  while (M < K && base->generator(M + 1) == mod->generator(M + 1)) ++M;
  rep.generators_agree = M;

  auto la = example51_language(), lb = example51_language(rep.N0);
  rep.levels_agree = 0;
  for (long lv = 1; lv <= rep.N0 + 1; ++lv) {
    auto a = la->enumerate_level(static_cast<int>(lv));
    auto b = lb->enumerate_level(static_cast<int>(lv));
    rep.level_sizes.push_back(a.size());
    if (a != b) break;
    rep.levels_agree = lv;
  }
  return rep;
}

}  // namespace codedshift
