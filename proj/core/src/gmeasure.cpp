#include "codedshift/gmeasure.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <functional>
#include <limits>
#include <unordered_map>

#include "json.hpp"

#include "codedshift/budget.hpp"
#include "codedshift/errors.hpp"
#include "codedshift/series.hpp"
#include "codedshift/spectral.hpp"

namespace codedshift {

using Kind = TailControl::Kind;

// ------------------------------------------------------------------ constants

MmeConstants::MmeConstants(std::shared_ptr<const GeneratorSystem> sys) : sys_(std::move(sys)) {}

RatInterval MmeConstants::lambda(int n) {
  std::lock_guard lk(mu_);
  if (lambda_ && (lambda_exact_ || lambda_->width() < pow2(-n))) return *lambda_;
  auto decl = sys_->declared();
  auto it = decl.find("lambda");
  if (it != decl.end() && it->second.value.is_point()) {
    lambda_ = it->second.value;
    lambda_exact_ = true;
    return *lambda_;
  }
  LambdaSolution s = solve_lambda_ex(*sys_, n);
  lambda_ = s.lambda;
  lambda_exact_ = s.exact || s.lambda.is_point();
  return *lambda_;
}

RatInterval MmeConstants::kappa(int n) {
  std::lock_guard lk(mu_);
  if (kappa_ && (kappa_fixed_ || kappa_->width() < pow2(-n))) return *kappa_;
  auto decl = sys_->declared();
  auto il = decl.find("lambda"), ik = decl.find("kappa");
  bool fixed = il != decl.end() && il->second.value.is_point() && ik != decl.end() && ik->second.value.is_point();
  if (fixed) {
    kappa_certified(*sys_, 8);  // cross-check against the declared value, throws on mismatch
    kappa_ = ik->second.value;
    kappa_fixed_ = true;
    return *kappa_;
  }
  kappa_ = kappa_certified(*sys_, n).value;
  return *kappa_;
}

GBernoulliSpec mme_spec(std::shared_ptr<const GeneratorSystem> sys) {
  GBernoulliSpec s;
  s.mme = std::make_shared<MmeConstants>(sys);
  s.system = std::move(sys);
  s.mode = WeightMode::Mme;
  return s;
}

GBernoulliSpec custom_spec(std::shared_ptr<const GeneratorSystem> sys, std::vector<Rat> p, Rat tail, RatInterval c) {
  if (p.empty()) throw Error(ErrorCode::InvalidArgument, "custom weights need at least one p_i");
  if (c.lo <= 0) throw Error(ErrorCode::InvalidArgument, "normalizing constant must be positive");
  if (tail < 0) throw Error(ErrorCode::InvalidArgument, "tail certificate must be >= 0");
  Rat sum = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] < 0) throw Error(ErrorCode::InvalidArgument, "negative weight p_" + std::to_string(i + 1));
    sum += p[i];
    if (sum > 1) throw Error(ErrorCode::InvalidArgument, "weights sum past 1 at p_" + std::to_string(i + 1));
    sys->generator(i + 1);
  }
  GBernoulliSpec s;
  s.system = std::move(sys);
  s.mode = WeightMode::Custom;
  s.custom_p = std::move(p);
  s.custom_tail = std::move(tail);
  s.custom_c = std::move(c);
  return s;
}

RatInterval g_cylinder_measure(const GBernoulliSpec& spec, const std::vector<std::size_t>& tuple, int n) {
  if (tuple.empty()) throw Error(ErrorCode::InvalidArgument, "empty tuple");
  if (spec.mode == WeightMode::Custom) {
    Rat p = 1;
    for (std::size_t i : tuple) {
      if (i < 1 || i > spec.custom_p.size())
        throw Error(ErrorCode::InvalidArgument, "generator index without a custom weight");
      p *= spec.custom_p[i - 1];
    }
    return RatInterval(p / spec.custom_c.hi, p / spec.custom_c.lo);
  }
  unsigned long L = 0;
  for (std::size_t i : tuple) L += spec.system->generator(i).size();
  RatInterval lam = spec.mme->lambda(n + 8);
  RatInterval c = spec.mme->kappa(n + 8);
  RatInterval x = iv_pow(RatInterval(1 / lam.hi, 1 / lam.lo), L);
  return RatInterval(x.lo / c.hi, x.hi / c.lo);
}

// ------------------------------------------------------------------ decomposition

namespace {

struct Bounds {
  Rat lo, hi;
  Bounds& operator+=(const Bounds& o) {
    lo += o.lo;
    hi += o.hi;
    return *this;
  }
};

// Aggregated decomposition sum
//   inner(w) + sum_{1<=a<=b<|w|} suf(w[0,a)) * tile(w[a,b)) * pre(w[b,|w|)),
// with tile(u) the weighted number of factorizations of u, via
//   A_b = suf(w[0,b)) + sum_{c<b, w[c,b) in G} A_c p(w[c,b)).
template <class V, class Pre, class Suf, class Inn, class Piece>
V aggregate(const Word& w, Pre pre, Suf suf, Inn inn, Piece piece) {
  const std::size_t L = w.size();
  V S = inn(w);
  std::vector<V> A(L + 1);
  std::vector<char> live(L + 1, 0);
  for (std::size_t b = 1; b < L; ++b) {
    V a = suf(w.substr(0, b));
    for (std::size_t c = 1; c < b; ++c) {
      if (!live[c]) continue;
      auto p = piece(c, b);
      if (p) a += A[c] * *p;
    }
    A[b] = a;
    live[b] = a != 0;
    if (live[b]) S += a * pre(w.substr(b));
  }
  return S;
}

// Generators 1..count with outward weight enclosures.
class Engine {
 public:
  Engine(const GeneratorSystem& sys, std::size_t count, const std::function<Bounds(std::size_t, const Word&)>& weight) {
    gens_.reserve(count);
    for (std::size_t i = 1; i <= count; ++i) {
      const Word& g = sys.generator(i);
      gens_.push_back(g);
      w_.push_back(weight(i, g));
      index_.emplace(g, i - 1);
    }
  }

  const Bounds& pre(const Word& v) {
    auto it = pre_.find(v);
    if (it != pre_.end()) return it->second;
    Bounds b{0, 0};
    for (std::size_t i = 0; i < gens_.size(); ++i)
      if (gens_[i].size() >= v.size() && gens_[i].compare(0, v.size(), v) == 0) b += w_[i];
    return pre_.emplace(v, b).first->second;
  }
  const Bounds& suf(const Word& u) {
    auto it = suf_.find(u);
    if (it != suf_.end()) return it->second;
    Bounds b{0, 0};
    for (std::size_t i = 0; i < gens_.size(); ++i)
      if (gens_[i].size() >= u.size() && gens_[i].compare(gens_[i].size() - u.size(), u.size(), u) == 0) b += w_[i];
    return suf_.emplace(u, b).first->second;
  }
  Bounds inner(const Word& w) const {
    Bounds b{0, 0};
    for (std::size_t i = 0; i < gens_.size(); ++i) {
      std::size_t k = occurrences(w, gens_[i]).size();
      if (k) {
        b.lo += w_[i].lo * k;
        b.hi += w_[i].hi * k;
      }
    }
    return b;
  }
  const Bounds* piece(const Word& u) const {
    auto it = index_.find(u);
    return it == index_.end() ? nullptr : &w_[it->second];
  }

  Bounds sum(const Word& w) {
    auto run = [&](bool hi) {
      auto sel = [hi](const Bounds& b) { return hi ? b.hi : b.lo; };
      return aggregate<Rat>(
          w, [&](const Word& v) { return sel(pre(v)); }, [&](const Word& u) { return sel(suf(u)); },
          [&](const Word& x) { return sel(inner(x)); },
          [&](std::size_t c, std::size_t b) -> std::optional<Rat> {
            const Bounds* p = piece(w.substr(c, b - c));
            if (!p) return std::nullopt;
            return sel(*p);
          });
    };
    return Bounds{run(false), run(true)};
  }

  std::optional<std::pair<Word, long>> witness(const Word& w) const {
    for (const auto& g : gens_) {
      auto pos = g.find(w);
      if (pos != Word::npos) return std::make_pair(g, static_cast<long>(pos));
    }
    const std::size_t L = w.size();
    // R[b]: concatenation covering w[0,b) exactly at its end, with the start offset of w
    std::vector<std::optional<std::pair<Word, long>>> R(L + 1);
    for (std::size_t b = 1; b < L; ++b) {
      Word head = w.substr(0, b);
      for (const auto& g : gens_)
        if (g.size() >= b && g.compare(g.size() - b, b, head) == 0) {
          R[b] = std::make_pair(g, static_cast<long>(g.size() - b));
          break;
        }
      for (std::size_t c = 1; c < b && !R[b]; ++c)
        if (R[c] && piece(w.substr(c, b - c))) R[b] = std::make_pair(R[c]->first + w.substr(c, b - c), R[c]->second);
      if (!R[b]) continue;
      Word tail = w.substr(b);
      for (const auto& g : gens_)
        if (g.size() >= tail.size() && g.compare(0, tail.size(), tail) == 0)
          return std::make_pair(R[b]->first + g, R[b]->second);
    }
    return std::nullopt;
  }

 private:
  std::vector<Word> gens_;
  std::vector<Bounds> w_;
  std::unordered_map<Word, std::size_t> index_;
  std::unordered_map<Word, Bounds> pre_, suf_;
};

// Everything needed to enclose cylinder values at one precision.
class MeasureContext {
 public:
  MeasureContext(const GBernoulliSpec& spec, int n, long maxword, int extra) : spec_(spec), n_(n) {
    const GeneratorSystem& sys = *spec.system;
    if (spec.mode == WeightMode::Custom) {
      c_ = spec.custom_c;
      custom_tail_ = spec.custom_tail / c_.lo;
      const auto& p = spec.custom_p;
      engine_ = std::make_unique<Engine>(sys, p.size(), [&p](std::size_t i, const Word&) {
        return Bounds{p[i - 1], p[i - 1]};
      });
      N_ = static_cast<long>(sys.generator(p.size()).size());
      return;
    }
    RatInterval lam = spec.mme->lambda(n + 8 + extra);
    c_ = spec.mme->kappa(n + 4 + extra);
    if (lam.is_point() && c_.is_point()) {
      series_ = sys.exact_series(1 / lam.lo);
      if (series_) {
        x_ = 1 / lam.lo;
        return;
      }
    }
    TailControl tc = sys.tail_control();
    const long B = n + 32 + extra;
    const Rat xlo = round_down(1 / lam.hi, B), xhi = round_up(1 / lam.lo, B);
    long N;
    if (tc.kind == Kind::Finite) {
      N = sys.max_length();
      tail_ = 0;
    } else {
      // least N0 with kappa.hi - sum_{k<=N0} k |G_k| lambda.hi^-k < 2^-(n+2)
      const Rat target = pow2(-(n + 2));
      const long cap = 1L << 14;
      long K = 64;
      std::vector<BigInt> counts = sys.counts_up_to(K);
      Rat partial = 0, xp = 1;
      long N0 = 0;
      for (long k = 1;; ++k) {
        if (k > cap) throw Error(ErrorCode::PrecisionExhausted, "generator tail does not fall below 2^-(n+2)");
        if (k > K) {
          K *= 2;
          counts = sys.counts_up_to(K);
        }
        xp = round_down(xp * xlo, B);
        if (counts[k] != 0) partial += Rat(counts[k] * k) * xp;
        if (c_.hi - partial < target) {
          N0 = k;
          break;
        }
      }
      N = std::max(N0, maxword);
      tail_ = pow2(-(n + 1));
    }
    std::vector<Bounds> table(static_cast<std::size_t>(N + 1));
    Rat lo = 1, hi = 1;
    for (long L = 1; L <= N; ++L) {
      lo = round_down(lo * xlo, B);
      hi = round_up(hi * xhi, B);
      table[L] = Bounds{lo, hi};
    }
    N_ = N;
    std::size_t count = sys.count_up_to_length(N);
    engine_ = std::make_unique<Engine>(sys, count, [&table](std::size_t, const Word& g) { return table[g.size()]; });
  }

  RatInterval enclose(const Word& w) {
    if (w.empty()) throw Error(ErrorCode::InvalidArgument, "empty word");
    if (!word_over_alphabet(w, spec_.system->alphabet_size())) return RatInterval(Rat(0));
    if (series_) {
      const GeneratorSystem& sys = *spec_.system;
      const ExactSeries& s = *series_;
      Rat v = aggregate<Rat>(
          w, [&](const Word& a) { return s.pre(a); }, [&](const Word& a) { return s.suf(a); },
          [&](const Word& a) { return s.inner(a); },
          [&](std::size_t c, std::size_t b) -> std::optional<Rat> {
            Word u = w.substr(c, b - c);
            if (!sys.is_generator(u)) return std::nullopt;
            Rat p = 1;
            for (std::size_t i = 0; i < u.size(); ++i) p *= x_;
            return p;
          });
      return RatInterval(v / c_.lo);
    }
    Bounds S = engine_->sum(w);
    Rat hi = S.hi / c_.lo + tail_ + custom_tail_ * static_cast<long>(w.size());
    RatInterval r(S.lo / c_.hi, std::min(hi, Rat(1)));
    if (r.lo > r.hi) r.lo = r.hi;
    return round_out(r, n_ + 6);
  }

  std::optional<std::pair<Word, long>> witness(const Word& w) {
    if (auto d = spec_.system->direct_witness(w)) return d;
    if (engine_) return engine_->witness(w);
    return std::nullopt;
  }

  bool custom() const { return spec_.mode == WeightMode::Custom; }
  long cutoff() const { return N_; }
  Rat tail_part(std::size_t len) const { return tail_ + custom_tail_ * static_cast<long>(len); }

 private:
  const GBernoulliSpec& spec_;
  int n_;
  RatInterval c_;
  Rat tail_ = 0;
  Rat custom_tail_ = 0;
  std::shared_ptr<const ExactSeries> series_;
  Rat x_;
  long N_ = 0;
  std::unique_ptr<Engine> engine_;
};

}  // namespace

std::vector<GCylinderTerm> enumerate_occurrences(const Word& w, const GeneratorSystem& sys, long N) {
  if (N < 1) throw Error(ErrorCode::InvalidArgument, "N must be >= 1");
  if (w.empty()) throw Error(ErrorCode::InvalidArgument, "empty word");
  std::size_t count = sys.count_up_to_length(N);
  std::vector<Word> gens;
  std::unordered_map<Word, std::size_t> index;
  for (std::size_t i = 1; i <= count; ++i) {
    gens.push_back(sys.generator(i));
    index.emplace(gens.back(), i);
  }
  std::vector<GCylinderTerm> out;
  for (std::size_t i = 0; i < gens.size(); ++i)
    for (std::size_t t : occurrences(w, gens[i])) out.push_back({{i + 1}, static_cast<long>(t)});

  const std::size_t L = w.size();
  // all factorizations of w[a,b) into generators
  std::function<void(std::size_t, std::size_t, std::vector<std::size_t>&, std::vector<std::vector<std::size_t>>&)> fact =
      [&](std::size_t a, std::size_t b, std::vector<std::size_t>& cur, std::vector<std::vector<std::size_t>>& res) {
        if (a == b) {
          res.push_back(cur);
          return;
        }
        for (std::size_t e = a + 1; e <= b; ++e) {
          auto it = index.find(w.substr(a, e - a));
          if (it == index.end()) continue;
          cur.push_back(it->second);
          fact(e, b, cur, res);
          cur.pop_back();
        }
      };
  for (std::size_t a = 1; a < L; ++a) {
    Word head = w.substr(0, a);
    std::vector<std::size_t> firsts;
    for (std::size_t i = 0; i < gens.size(); ++i)
      if (gens[i].size() >= a && gens[i].compare(gens[i].size() - a, a, head) == 0) firsts.push_back(i);
    if (firsts.empty()) continue;
    for (std::size_t b = a; b < L; ++b) {
      std::vector<std::vector<std::size_t>> mids;
      std::vector<std::size_t> cur;
      fact(a, b, cur, mids);
      if (mids.empty()) continue;
      Word rest = w.substr(b);
      std::vector<std::size_t> lasts;
      for (std::size_t i = 0; i < gens.size(); ++i)
        if (gens[i].size() >= rest.size() && gens[i].compare(0, rest.size(), rest) == 0) lasts.push_back(i);
      for (std::size_t f : firsts)
        for (const auto& m : mids)
          for (std::size_t l : lasts) {
            GCylinderTerm t;
            t.tuple.push_back(f + 1);
            t.tuple.insert(t.tuple.end(), m.begin(), m.end());
            t.tuple.push_back(l + 1);
            t.offset = static_cast<long>(gens[f].size() - a);
            out.push_back(std::move(t));
          }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

RatInterval cylinder_measure(const GBernoulliSpec& spec, const Word& w, int n) {
  const Rat target = pow2(-n);
  const int budget = retry_budget();
  for (int extra = 0; extra <= 8 * budget; extra += 8) {
    MeasureContext ctx(spec, n, static_cast<long>(w.size()), extra);
    RatInterval r = ctx.enclose(w);
    if (r.width() < target) return r;
    if (ctx.custom()) {
      if (ctx.tail_part(w.size()) * 2 >= target)
        throw Error(ErrorCode::TailNotBoundable, "custom tail certificate is too coarse for 2^-" + std::to_string(n));
      break;
    }
  }
  throw Error(ErrorCode::PrecisionExhausted, "cylinder enclosure did not reach 2^-" + std::to_string(n));
}

long cylinder_cutoff(const GBernoulliSpec& spec, const Word& w, int n) {
  return MeasureContext(spec, n, static_cast<long>(w.size()), 0).cutoff();
}

RatInterval noncentered_measure(const GBernoulliSpec& spec, const Word& w, long /*r*/, int n) {
  // sigma^-r [w] has the same measure for every r under an invariant measure
  return cylinder_measure(spec, w, n);
}

// ------------------------------------------------------------------ ideal measures

IdealMeasure ideal_measure(const GBernoulliSpec& spec, const LanguageOracle& lang, int n, IdealMeasureStats* stats) {
  if (n < 0) throw Error(ErrorCode::InvalidArgument, "precision must be >= 0");
  const GeneratorSystem& sys = *spec.system;
  if (lang.alphabet_size() != sys.alphabet_size())
    throw Error(ErrorCode::AlphabetMismatch, "language and system alphabets differ");
  const long N = n;
  const int level = static_cast<int>(2 * N + 1);
  std::size_t ell = lang.level_size(level);
  if (ell == 0) throw Error(ErrorCode::LanguageLevelEmpty, "L_" + std::to_string(level) + " is empty");
  const int p = static_cast<int>(n + ceil_log2(Rat(static_cast<unsigned long>(24 * ell))));
  const Rat step = pow2(-p);
  const int budget = retry_budget();

  int extra = 0;
  auto ctx = std::make_unique<MeasureContext>(spec, p, level, extra);
  IdealMeasure m;
  m.alphabet_size = sys.alphabet_size();
  m.precision = n;
  Rat mass = 0;
  Word last;
  bool last_has_atom = false;
  lang.for_each_level(level, [&](const Word& w) {
    RatInterval r = ctx->enclose(w);
    while (r.width() >= step) {
      extra += 8;
      if (extra > 8 * budget || ctx->custom())
        throw Error(ErrorCode::PrecisionExhausted, "cylinder enclosures did not reach 2^-" + std::to_string(p));
      ctx = std::make_unique<MeasureContext>(spec, p, level, extra);
      r = ctx->enclose(w);
    }
    last = w;
    last_has_atom = false;
    Rat q = round_down(r.lo - step, p + 8);
    if (q <= 0) return;
    auto wit = ctx->witness(w);
    if (!wit)
      throw Error(ErrorCode::PrecisionExhausted,
                  "positive cylinder without a generator witness: " + word_to_text(w));
    m.atoms.push_back({periodic_point(wit->first, wit->second + N), q});
    mass += q;
    last_has_atom = true;
  });
  Rat left = 1 - mass;
  if (left < 0) throw Error(ErrorCode::PrecisionExhausted, "internal: lower bounds exceed total mass");
  if (left > 0) {
    if (last_has_atom) {
      m.atoms.back().weight += left;
    } else if (auto wit = ctx->witness(last)) {
      m.atoms.push_back({periodic_point(wit->first, wit->second + N), left});
    } else if (!m.atoms.empty()) {
      m.atoms.back().weight += left;
    } else {
      throw Error(ErrorCode::PrecisionExhausted, "no cylinder of L_" + std::to_string(level) + " has a witness");
    }
  }
  if (stats) {
    stats->level_size = ell;
    stats->N = N;
    stats->precision_bits = p;
    stats->leftover = left;
  }
  return m;
}

// ------------------------------------------------------------------ JSON

static const char* kSymbols = "0123456789abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ+/";

std::string word_to_text(const Word& w) {
  std::string s;
  s.reserve(w.size());
  for (char c : w) {
    if (sym(c) >= kMaxAlphabet) throw Error(ErrorCode::InvalidArgument, "symbol out of range");
    s.push_back(kSymbols[sym(c)]);
  }
  return s;
}

Word word_from_text(const std::string& s) {
  Word w;
  w.reserve(s.size());
  for (char c : s) {
    const char* p = std::strchr(kSymbols, c);
    if (c == '\0' || !p) throw Error(ErrorCode::ParseError, std::string("bad symbol '") + c + "' in word");
    w.push_back(to_char(static_cast<int>(p - kSymbols)));
  }
  return w;
}

std::string ideal_measure_to_json(const IdealMeasure& m) {
  nlohmann::ordered_json j;
  j["alphabet"] = m.alphabet_size;
  if (m.precision) j["precision"] = *m.precision;
  nlohmann::ordered_json atoms = nlohmann::ordered_json::array();
  for (const auto& a : m.atoms) {
    nlohmann::ordered_json pt;
    pt["left"] = word_to_text(a.point.left);
    pt["center"] = word_to_text(a.point.center);
    pt["right"] = word_to_text(a.point.right);
    pt["offset"] = a.point.offset;
    nlohmann::ordered_json at;
    at["point"] = pt;
    at["weight"] = to_string(a.weight);
    atoms.push_back(at);
  }
  j["atoms"] = atoms;
  return j.dump(1) + "\n";
}

IdealMeasure ideal_measure_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("invalid JSON: ") + e.what());
  }
  IdealMeasure m;
  try {
    if (!j.is_object() || !j.contains("atoms") || !j["atoms"].is_array())
      throw Error(ErrorCode::ParseError, "expected an object with an \"atoms\" array");
    int maxsym = -1;
    for (const auto& a : j["atoms"]) {
      const auto& pt = a.at("point");
      Atom at;
      at.point.left = word_from_text(pt.at("left").get<std::string>());
      at.point.center = word_from_text(pt.at("center").get<std::string>());
      at.point.right = word_from_text(pt.at("right").get<std::string>());
      at.point.offset = pt.at("offset").get<long>();
      if (at.point.left.empty() || at.point.right.empty())
        throw Error(ErrorCode::ParseError, "point periods must be nonempty");
      at.weight = parse_rat(a.at("weight").get<std::string>());
      for (const Word* w : {&at.point.left, &at.point.center, &at.point.right})
        for (char c : *w) maxsym = std::max(maxsym, static_cast<int>(sym(c)));
      m.atoms.push_back(std::move(at));
    }
    if (j.contains("precision")) m.precision = j["precision"].get<int>();
    if (j.contains("alphabet")) {
      m.alphabet_size = j["alphabet"].get<int>();
      if (maxsym >= m.alphabet_size) throw Error(ErrorCode::ParseError, "symbol outside the declared alphabet");
    } else {
      m.alphabet_size = maxsym + 1;
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("malformed ideal measure: ") + e.what());
  }
  check_ideal_measure(m);
  return m;
}

// ------------------------------------------------------------------ W1

namespace {

long interleaved_coord(long t) { return t == 0 ? 0 : ((t % 2 == 1) ? (t + 1) / 2 : -(t / 2)); }

// First interleaved symbols x_0 x_1 x_{-1} x_2 ... packed MSB first into two words.
struct Packed {
  int bits = 1, per_word = 64;
  explicit Packed(int d) {
    while ((1 << bits) < d) ++bits;
    per_word = 64 / bits;
  }
  long depth() const { return 2L * per_word; }
  std::array<std::uint64_t, 2> key(const EpPoint& p) const {
    std::array<std::uint64_t, 2> k{0, 0};
    for (long t = 0; t < depth(); ++t) {
      long w = t / per_word, i = t % per_word;
      k[w] |= static_cast<std::uint64_t>(p.at(interleaved_coord(t))) << (64 - bits * (i + 1));
    }
    return k;
  }
  // leading equal symbols, depth() when the keys agree
  long lcp(const std::array<std::uint64_t, 2>& a, const std::array<std::uint64_t, 2>& b) const {
    for (int w = 0; w < 2; ++w) {
      std::uint64_t x = a[w] ^ b[w];
      if (x) return w * per_word + std::countl_zero(x) / bits;
    }
    return depth();
  }
};

struct Entry {
  std::array<std::uint64_t, 2> key;
  std::uint32_t idx;  // top bit set: second measure
};

constexpr std::uint32_t kSecond = 1u << 31;

class Merged {
 public:
  Merged(const IdealMeasure& a, const IdealMeasure* b) : a_(a), b_(b), pk_(std::max(a.alphabet_size, 2)) {
    std::size_t total = a.atoms.size() + (b ? b->atoms.size() : 0);
    if (total >= kSecond) throw Error(ErrorCode::InvalidArgument, "too many atoms");
    e_.reserve(total);
    for (std::size_t i = 0; i < a.atoms.size(); ++i) e_.push_back({pk_.key(a.atoms[i].point), static_cast<std::uint32_t>(i)});
    if (b)
      for (std::size_t i = 0; i < b->atoms.size(); ++i)
        e_.push_back({pk_.key(b->atoms[i].point), static_cast<std::uint32_t>(i) | kSecond});
    std::sort(e_.begin(), e_.end(), [this](const Entry& x, const Entry& y) {
      if (x.key != y.key) return x.key < y.key;
      return interleaved_compare(point(x), point(y)) < 0;
    });
  }
  std::size_t size() const { return e_.size(); }
  const EpPoint& point(const Entry& x) const {
    return (x.idx & kSecond) ? b_->atoms[x.idx & ~kSecond].point : a_.atoms[x.idx].point;
  }
  Rat delta(std::size_t i) const {
    const Entry& x = e_[i];
    return (x.idx & kSecond) ? Rat(-b_->atoms[x.idx & ~kSecond].weight) : a_.atoms[x.idx].weight;
  }
  // equal leading interleaved symbols of entries i, i+1; -1 when the points coincide
  long common_prefix(std::size_t i) const {
    long l = pk_.lcp(e_[i].key, e_[i + 1].key);
    if (l < pk_.depth()) return l;
    long lcp = 0;
    if (interleaved_compare(point(e_[i]), point(e_[i + 1]), &lcp) == 0) return -1;
    return lcp;
  }

 private:
  const IdealMeasure& a_;
  const IdealMeasure* b_;
  Packed pk_;
  std::vector<Entry> e_;
};

}  // namespace

void check_ideal_measure(const IdealMeasure& m) {
  Rat sum = 0;
  for (const auto& a : m.atoms) {
    if (a.weight <= 0) throw Error(ErrorCode::InvalidArgument, "atom weights must be positive");
    if (a.point.left.empty() || a.point.right.empty())
      throw Error(ErrorCode::InvalidArgument, "point periods must be nonempty");
    sum += a.weight;
  }
  if (sum != 1) throw Error(ErrorCode::InvalidArgument, "weights sum to " + to_string(sum) + ", not 1");
  Merged e(m, nullptr);
  for (std::size_t i = 0; i + 1 < e.size(); ++i)
    if (e.common_prefix(i) < 0) throw Error(ErrorCode::InvalidArgument, "atom points are not distinct");
}

Rat w1_exact(const IdealMeasure& a, const IdealMeasure& b) {
  if (a.alphabet_size != b.alphabet_size) throw Error(ErrorCode::AlphabetMismatch, "measures over different alphabets");
  Merged e(a, &b);
  std::vector<Rat> pw;  // pw[k] = 2^-k
  auto p2 = [&pw](long k) -> const Rat& {
    while (static_cast<long>(pw.size()) <= k) pw.push_back(pow2(-static_cast<long>(pw.size())));
    return pw[k];
  };
  // level of a common prefix: largest j with both points in one window [-j, j]
  auto level_of = [](long l) { return l >= 1 ? (l - 1) / 2 : -1L; };
  struct Node {
    long v;
    Rat sum;
  };
  std::vector<Node> st;
  Rat total = 0;
  long left = -1;
  const std::size_t M = e.size();
  std::size_t i = 0;
  while (i < M) {
    // merge entries at the same point
    Rat delta = e.delta(i);
    long l = -1;
    while (i + 1 < M && (l = e.common_prefix(i)) < 0) delta += e.delta(++i);
    bool last = i + 1 >= M;
    long right = last ? -1 : level_of(l);
    if (delta != 0) total += abs(delta) * p2(std::max(left, right) + 2);  // windows j > max(left, right)
    Rat carry = std::move(delta);
    while (!st.empty() && st.back().v > right) {
      Node node = std::move(st.back());
      st.pop_back();
      node.sum += carry;
      long parent = std::max(right, st.empty() ? -1L : st.back().v);
      if (node.sum != 0) total += abs(node.sum) * (p2(parent + 2) - p2(node.v + 2));  // windows parent+1 .. v
      carry = std::move(node.sum);
    }
    if (!last) {
      if (!st.empty() && st.back().v == right)
        st.back().sum += carry;
      else
        st.push_back({right, std::move(carry)});
    }
    left = right;
    ++i;
  }
  return total;
}

Rat w1_transport(const IdealMeasure& a, const IdealMeasure& b) {
  if (a.alphabet_size != b.alphabet_size) throw Error(ErrorCode::AlphabetMismatch, "measures over different alphabets");
  const std::size_t A = a.atoms.size(), B = b.atoms.size();
  // nodes: 0 source, 1..A, A+1..A+B, A+B+1 sink
  const std::size_t V = A + B + 2, S = 0, T = A + B + 1;
  struct Edge {
    std::size_t to;
    Rat cap, cost;
    bool inf;
    std::size_t rev;
  };
  std::vector<std::vector<Edge>> g(V);
  auto add = [&g](std::size_t u, std::size_t v, const Rat& cap, const Rat& cost, bool inf) {
    g[u].push_back({v, cap, cost, inf, g[v].size()});
    g[v].push_back({u, Rat(0), -cost, false, g[u].size() - 1});
  };
  for (std::size_t i = 0; i < A; ++i) add(S, 1 + i, a.atoms[i].weight, Rat(0), false);
  for (std::size_t j = 0; j < B; ++j) add(1 + A + j, T, b.atoms[j].weight, Rat(0), false);
  for (std::size_t i = 0; i < A; ++i)
    for (std::size_t j = 0; j < B; ++j) add(1 + i, 1 + A + j, Rat(0), metric_d(a.atoms[i].point, b.atoms[j].point), true);
  Rat total = 0;
  for (;;) {
    // Bellman-Ford over the residual graph
    std::vector<std::optional<Rat>> dist(V);
    std::vector<std::pair<std::size_t, std::size_t>> prev(V, {V, 0});
    dist[S] = Rat(0);
    for (std::size_t it = 0; it + 1 < V; ++it) {
      bool changed = false;
      for (std::size_t u = 0; u < V; ++u) {
        if (!dist[u]) continue;
        for (std::size_t k = 0; k < g[u].size(); ++k) {
          const Edge& e = g[u][k];
          if (!e.inf && e.cap <= 0) continue;
          Rat nd = *dist[u] + e.cost;
          if (!dist[e.to] || nd < *dist[e.to]) {
            dist[e.to] = nd;
            prev[e.to] = {u, k};
            changed = true;
          }
        }
      }
      if (!changed) break;
    }
    if (!dist[T]) break;
    std::optional<Rat> push;
    for (std::size_t v = T; v != S; v = prev[v].first) {
      const Edge& e = g[prev[v].first][prev[v].second];
      if (!e.inf && (!push || e.cap < *push)) push = e.cap;
    }
    if (!push || *push <= 0) break;
    for (std::size_t v = T; v != S; v = prev[v].first) {
      Edge& e = g[prev[v].first][prev[v].second];
      if (!e.inf) e.cap -= *push;
      g[v][e.rev].cap += *push;
    }
    total += *push * *dist[T];
  }
  return total;
}

}  // namespace codedshift
