#include "codedshift/spectral.hpp"

#include <algorithm>
#include <cmath>

#include "codedshift/budget.hpp"
#include "codedshift/errors.hpp"
#include "codedshift/series.hpp"

namespace codedshift {

using Kind = TailControl::Kind;

CharEvaluation char_eval(const GeneratorSystem& sys, const RatInterval& lambda, long N) {
  if (lambda.lo <= 1) throw Error(ErrorCode::LambdaTooSmall, "lambda must exceed 1");
  TailControl tc = sys.tail_control();
  long maxlen = -1;
  if (tc.kind == Kind::Finite) {
    maxlen = sys.max_length();
    N = maxlen;
  }
  std::vector<BigInt> c = sys.counts_up_to(N);
  CharEvaluation ev;
  ev.lambda = lambda;
  ev.terms_used = N;
  ev.partial_value = RatInterval(weighted_power_sum(c, 1 / lambda.hi, N, 0), weighted_power_sum(c, 1 / lambda.lo, N, 0));
  Rat scale = 0;
  if (tc.kind == Kind::GapEpsilon) scale = Rat(sys.alphabet_size()) * gap_theta(tc.eps);
  auto t = tail_sum_bound(tc, 1 / lambda.lo, N, 0, scale, maxlen);
  if (!t) throw Error(ErrorCode::RatioNotCertifiable, "tail ratio is not below 1 at lambda.lo");
  ev.tail_bound = *t;
  return ev;
}

namespace {

struct Solver {
  const GeneratorSystem& sys;
  TailControl tc;
  bool finite;
  long maxlen = -1;
  long N;
  std::vector<BigInt> counts;
  Rat theta;
  Rat U;

  explicit Solver(const GeneratorSystem& s) : sys(s), tc(s.tail_control()) {
    finite = tc.kind == Kind::Finite;
    if (tc.kind == Kind::None) tail_sum_bound(tc, Rat(1, 2), 0, 0, Rat(0), -1);  // throws
    if (finite) {
      if (tc.count == 0) throw Error(ErrorCode::NoRootBracket, "empty system");
      maxlen = sys.max_length();
      N = maxlen;
    } else {
      N = std::max<long>(64, 4 * sys.min_length());
    }
    counts = sys.counts_up_to(N);
    if (tc.kind == Kind::GapEpsilon) theta = gap_theta(tc.eps);
    U = sys.alphabet_size();  // lambda* <= d for uniquely decodable systems
  }

  bool grow() {
    if (finite || N >= (1L << 14)) return false;
    N *= 2;
    counts = sys.counts_up_to(N);
    return true;
  }

  Rat partial(const Rat& lam) const { return weighted_power_sum(counts, 1 / lam, N, 0); }

  std::optional<Rat> upper(const Rat& lam, const Rat& p) const {
    auto t = tail_sum_bound(tc, 1 / lam, N, 0, U * theta, maxlen);
    if (!t) return std::nullopt;
    return p + *t;
  }
};

}  // namespace

LambdaSolution solve_lambda_ex(const GeneratorSystem& sys, int n) {
  Solver s(sys);
  const int budget = retry_budget();
  if (s.finite && s.tc.count == 1)
    throw Error(ErrorCode::NoRootBracket, "single generator: degenerate root lambda = 1");
  const bool gap = s.tc.kind == Kind::GapEpsilon;

  // upper end of the bracket: f(hi) + tail < 1
  Rat hi = sys.alphabet_size();
  for (int r = 0;; ++r) {
    if (r > 4 * budget) throw Error(ErrorCode::NoRootBracket, "could not certify f(hi) < 1");
    Rat p = s.partial(hi);
    if (s.finite && p == 1) return {RatInterval(hi), s.N, true};
    if (p > 1) {
      if (gap) throw Error(ErrorCode::NoRootBracket, "f_N(d) > 1: the system is not uniquely decodable");
      hi *= 2;
      continue;
    }
    auto up = s.upper(hi, p);
    if (up && *up < 1) break;
    if (r % 2 == 0)
      hi += 1;
    else if (!s.grow())
      hi *= 2;
  }

  // lower end: f_N(lo) > 1 from the partial sum alone
  Rat lo;
  for (int j = 0;; ++j) {
    if (j > 64 + 4 * budget)
      throw Error(ErrorCode::NoRootBracket, "f_N(lambda) <= 1 for every scanned lambda > 1 (degenerate system)");
    lo = 1 + pow2(-j);
    if (lo >= hi) continue;
    Rat p = s.partial(lo);
    if (s.finite && p == 1) return {RatInterval(lo), s.N, true};
    if (p > 1) break;
    if (j % 4 == 3) s.grow();
  }

  const Rat target = pow2(-n);
  const long grid = n + 8;
  while (hi - lo >= target) {
    if (gap && hi < s.U) s.U = hi;
    Rat mid = (lo + hi) / 2;
    if (gap && s.U * s.theta >= mid) mid = round_up((s.U * s.theta + hi) / 2, grid + 4);
    if (mid >= hi || mid <= lo) mid = (lo + hi) / 2;
    bool decided = false;
    for (int attempt = 0; attempt < 2 * budget + 8 && !decided; ++attempt) {
      Rat p = s.partial(mid);
      if (p > 1) {
        lo = mid;
        decided = true;
        break;
      }
      if (s.finite && p == 1) return {RatInterval(mid), s.N, true};
      auto up = s.upper(mid, p);
      if (up && *up < 1) {
        hi = mid;
        decided = true;
        break;
      }
      // undecided: move the split point off the root, or add terms
      if (attempt % 3 == 2 || !s.grow()) {
        Rat frac = (attempt % 2 == 0) ? Rat(3, 8) : Rat(5, 8);
        mid = lo + (hi - lo) * frac;
      }
    }
    if (decided) continue;
    // slope fallback: |f'| >= k0 c_k0 hi^-(k0+1) on the bracket
    long k0 = sys.min_length();
    Rat slope = Rat(s.counts[k0] * k0) / (pow_rounded(RatInterval(hi), static_cast<unsigned long>(k0 + 1), grid + 32).hi);
    Rat p = s.partial(mid);
    auto up = s.upper(mid, p);
    if (!up) throw Error(ErrorCode::PrecisionExhausted, "bisection undecided and tail unbounded at the split point");
    Rat nlo = std::max(lo, round_down(mid - (1 - p) / slope, grid + 8));
    Rat nhi = std::min(hi, round_up(mid + (*up - 1) / slope, grid + 8));
    if (nhi - nlo >= hi - lo) throw Error(ErrorCode::PrecisionExhausted, "bisection made no progress within budget");
    lo = nlo;
    hi = nhi;
  }
  return {RatInterval(lo, hi), s.N, false};
}

RatInterval solve_lambda(const GeneratorSystem& sys, int n) { return solve_lambda_ex(sys, n).lambda; }

RatInterval h_from_lambda(const RatInterval& lam, int n) {
  if (lam.lo <= 1) throw Error(ErrorCode::LambdaTooSmall, "lambda must exceed 1");
  RatInterval a = log_bounds(lam.lo, n + 2);
  RatInterval b = lam.is_point() ? a : log_bounds(lam.hi, n + 2);
  RatInterval h(a.lo, b.hi);
  if (h.width() >= pow2(-n))
    throw Error(ErrorCode::InsufficientInputPrecision,
                "lambda enclosure too wide for 2^-" + std::to_string(n) + "; need lambda width below about 2^-" +
                    std::to_string(n + 2));
  return h;
}

RatInterval h_lower_finite(const GeneratorSystem& sys, std::size_t m, int n) {
  if (m < 1) throw Error(ErrorCode::InvalidArgument, "m must be >= 1");
  std::vector<Word> words;
  for (std::size_t i = 1; i <= m; ++i) {
    auto g = sys.try_generator(i);
    if (!g) break;
    words.push_back(*g);
  }
  if (words.size() == 1) return RatInterval(Rat(0));
  ListSystem code(sys.alphabet_size(), words);
  const long g = n + 2;
  RatInterval h;
  for (int p = n + 6, tries = 0; tries < 16; p += 16, ++tries) {
    RatInterval lam = solve_lambda(code, p);
    h = h_from_lambda(lam, p);
    Rat f = round_down(h.lo, g);
    // log of an algebraic number != 1 is irrational, so refinement separates it from the grid
    if (round_down(h.hi, g) == f && h.lo > f) return RatInterval(f, f + pow2(-g));
  }
  return RatInterval(round_down(h.lo, g), round_up(h.hi, g));
}

std::vector<Rat> h_upper_search(const GeneratorSystem& sys, const KappaOracle& kappa, int steps) {
  std::vector<Rat> hs;
  if (steps < 1) return hs;
  const int d = sys.alphabet_size();
  TailControl tc = sys.tail_control();
  const bool finite = tc.kind == Kind::Finite;
  if (tc.kind == Kind::None) tail_sum_bound(tc, Rat(1, 2), 0, 0, Rat(0), -1);  // throws
  const long maxlen = finite ? sys.max_length() : -1;
  Rat theta = tc.kind == Kind::GapEpsilon ? gap_theta(tc.eps) : Rat(0);
  CountCache counts(sys);

  Rat h = d == 1 ? Rat(0) : round_up(log_bounds(Rat(d), 24).hi, 24);
  hs.push_back(h);
  Rat q;
  for (int n = 1; n < steps; ++n) {
    Rat T = kappa(n);
    Rat cand = T - pow2(1 - n);
    q = (n == 1) ? cand : std::max(q, cand);
    const Rat threshold = q + pow2(-n);
    const Rat tail_target = pow2(-(n + 2));
    const long ybits = n + 20;
    Rat scale = 0;
    if (tc.kind == Kind::GapEpsilon) scale = round_up(exp_bounds(h, 24).hi, 24) * theta;

    const long G = std::min<long>(1L << std::min(n, 16), 1L << 16);
    Rat next = h;
    for (long i = 1; i <= G; ++i) {
      Rat t = round_up(h * ratio(i, G), ybits);
      if (t >= h) break;
      Rat y = round_up(exp_bounds(-t, static_cast<int>(ybits)).hi, ybits);
      long N;
      std::optional<Rat> tail;
      if (finite) {
        N = maxlen;
        tail = Rat(0);
      } else {
        // cheap estimate to skip points whose tail would need too many terms
        double td = std::max(1e-12, t.get_d());
        if ((n + 4) * 0.7 / td > 8192) continue;
        N = 8;
        for (;;) {
          tail = tail_sum_bound(tc, y, N, 1, scale, maxlen);
          if (!tail) break;
          if (*tail <= tail_target) break;
          if (N > 8192) {
            tail.reset();
            break;
          }
          N *= 2;
        }
        if (!tail) continue;
      }
      Rat upper = weighted_power_sum(counts.get(N), y, N, 1) + *tail;
      if (upper <= threshold) {
        next = t;
        break;  // ascending scan: first accepted point is the minimum
      }
    }
    h = std::min(h, next);
    hs.push_back(h);
  }
  return hs;
}

}  // namespace codedshift
