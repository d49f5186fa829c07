#include "codedshift/verejones.hpp"

#include <map>
#include <memory>
#include <mutex>

#include "codedshift/budget.hpp"
#include "codedshift/errors.hpp"
#include "codedshift/series.hpp"

namespace codedshift {

using Kind = TailControl::Kind;

RatInterval kappa_partial(const GeneratorSystem& sys, const RatInterval& lambda, std::size_t ell) {
  if (lambda.lo <= 1) throw Error(ErrorCode::LambdaTooSmall, "lambda must exceed 1");
  Rat lo(0), hi(0);
  Rat ilo = 1 / lambda.hi, ihi = 1 / lambda.lo;
  for (std::size_t i = 1; i <= ell; ++i) {
    auto g = sys.try_generator(i);
    if (!g) break;
    unsigned long k = g->size();
    RatInterval pw = iv_pow(RatInterval(ilo, ihi), k);
    lo += Rat(k) * pw.lo;
    hi += Rat(k) * pw.hi;
  }
  return RatInterval(lo, hi);
}

static std::optional<RatInterval> declared_lambda_point(const GeneratorSystem& sys) {
  auto decl = sys.declared();
  auto it = decl.find("lambda");
  if (it != decl.end() && it->second.value.is_point()) return it->second.value;
  return std::nullopt;
}

static void cross_check(const GeneratorSystem& sys, KappaCertificate& cert) {
  auto decl = sys.declared();
  auto it = decl.find("kappa");
  if (it == decl.end()) return;
  const RatInterval& dv = it->second.value;
  if (dv.hi < cert.value.lo || dv.lo > cert.value.hi)
    throw Error(ErrorCode::DeclaredConstantMismatch,
                "certified kappa [" + to_string(cert.value.lo) + ", " + to_string(cert.value.hi) +
                    "] disagrees with declared [" + to_string(dv.lo) + ", " + to_string(dv.hi) + "]");
  cert.declared_checked = true;
}

KappaCertificate kappa_certified(const GeneratorSystem& sys, int n) {
  TailControl tc = sys.tail_control();
  if (tc.kind == Kind::None) tail_sum_bound(tc, Rat(1, 2), 0, 0, Rat(0), -1);  // throws
  const Rat target = pow2(-n);
  const Rat piece = pow2(-(n + 2));
  const int budget = retry_budget();
  auto fixed = declared_lambda_point(sys);
  CountCache counts(sys);

  int p = n + 4;
  Rat last_ratio;
  for (int attempt = 0; attempt <= budget; ++attempt, p *= 2) {
    RatInterval lam = fixed ? *fixed : solve_lambda(sys, p);
    KappaCertificate cert;
    cert.lambda_used = lam;
    if (tc.kind == Kind::Finite) {
      long L = sys.max_length();
      auto c = counts.get(L);
      cert.value = RatInterval(weighted_power_sum(c, 1 / lam.hi, L, 1), weighted_power_sum(c, 1 / lam.lo, L, 1));
      cert.terms_used = L;
      cert.tail_bound = 0;
      cert.ratio = 0;
      Rat l2 = weighted_power_sum(c, 1 / lam.lo, L, 2) / lam.lo;
      cert.lipschitz_bound = l2;
      if (cert.value.width() < target) {
        cross_check(sys, cert);
        return cert;
      }
      if (fixed) break;
      continue;
    }
    // term_k <= cst * k^(1+e) * rho^k
    Rat rho, cst;
    int e = 0;
    if (tc.kind == Kind::BoundedGrowth) {
      rho = 1 / lam.lo;
      cst = tc.bound;
    } else if (tc.kind == Kind::PolynomialGrowth) {
      rho = 1 / lam.lo;
      cst = tc.bound;
      e = static_cast<int>(tc.degree);
    } else {
      rho = lam.hi * gap_theta(tc.eps) / lam.lo;
      cst = 1;
    }
    last_ratio = rho;
    if (rho >= 1) {
      if (fixed) break;
      continue;
    }
    long N = 1;
    while (cst * geom_tails(rho, N, 1 + e) >= piece) N *= 2;
    long a = N / 2, b = N;  // smallest N with the bound, by bisection
    while (b - a > 1) {
      long m = (a + b) / 2;
      if (cst * geom_tails(rho, m, 1 + e) < piece)
        b = m;
      else
        a = m;
    }
    N = std::max(b, sys.min_length());
    auto c = counts.get(N);
    Rat plo = weighted_power_sum(c, 1 / lam.hi, N, 1);
    Rat phi = weighted_power_sum(c, 1 / lam.lo, N, 1);
    cert.tail_bound = cst * geom_tails(rho, N, 1 + e);
    cert.lipschitz_bound = cst / lam.lo * geom_tails(rho, 0, 2 + e);
    cert.terms_used = N;
    cert.ratio = rho;
    cert.value = RatInterval(plo, phi + cert.tail_bound);
    // certificate arithmetic: partial spread is bounded by the Lipschitz slack
    if (phi - plo > cert.lipschitz_bound * lam.width())
      throw Error(ErrorCode::PrecisionExhausted, "internal: Lipschitz certificate violated");
    if (cert.lipschitz_bound * lam.width() < piece && cert.value.width() < target) {
      cross_check(sys, cert);
      return cert;
    }
    if (fixed) break;
  }
  throw Error(ErrorCode::RatioNotCertifiable,
              "could not certify kappa to 2^-" + std::to_string(n) + " within budget (last ratio " +
                  std::to_string(last_ratio.get_d()) + ")");
}

std::vector<Rat> kappa_lower_seq(const GeneratorSystem& sys, const RatInterval& lambda, int steps) {
  if (lambda.lo <= 1) throw Error(ErrorCode::LambdaTooSmall, "lambda must exceed 1");
  std::vector<Rat> out;
  if (steps < 1) return out;
  TailControl tc = sys.tail_control();
  long cap = steps;
  if (tc.kind == Kind::Finite) cap = std::min<long>(cap, sys.max_length());
  auto c = sys.counts_up_to(cap);
  Rat best(0);
  for (int j = 1; j <= steps; ++j) {
    Rat v = weighted_power_sum(c, 1 / lambda.hi, std::min<long>(j, cap), 1);
    if (j == 1 || v > best) best = v;
    out.push_back(best);
  }
  return out;
}

KappaOracle certified_kappa_oracle(const GeneratorSystem& sys) {
  auto cache = std::make_shared<std::map<int, Rat>>();
  auto mu = std::make_shared<std::mutex>();
  const GeneratorSystem* s = &sys;
  return [cache, mu, s](int n) -> Rat {
    std::lock_guard lk(*mu);
    auto it = cache->find(n);
    if (it != cache->end()) return it->second;
    KappaCertificate c = kappa_certified(*s, n + 1);
    Rat v = c.value.mid();
    (*cache)[n] = v;
    return v;
  };
}

GapResult gap_epsilon_from_growth(const GeneratorSystem& sys, const RatInterval& lambda,
                                  const std::function<BigInt(long)>& growth, long start) {
  if (lambda.lo <= 1) throw Error(ErrorCode::LambdaTooSmall, "lambda must exceed 1");
  const int prec = 40;
  Rat H_lo = log_bounds(lambda.lo, prec).lo;
  Rat H_hi = log_bounds(lambda.hi, prec).hi;
  // N: growth(k)^2 < lambda_lo^k for k = N+1, i.e. (1/k) log growth(k) < h/2
  long N = std::max<long>(start, 0);
  const long cap = 1L << 20;
  for (;; ++N) {
    if (N > cap) throw Error(ErrorCode::PrecisionExhausted, "growth bound never drops below h/2");
    long k = N + 1;
    BigInt g = growth(k);
    Rat lhs(g * g);
    RatInterval pw = pow_rounded(RatInterval(lambda.lo), static_cast<unsigned long>(k), 64);
    if (lhs < pw.lo) break;
  }
  Rat A = H_hi / 2;
  auto c = sys.counts_up_to(N);
  long blocking = -1;
  for (long k = 1; k <= N; ++k) {
    if (c[k] <= 1) continue;
    Rat mk = log_bounds(Rat(c[k]), prec).hi / k;
    if (mk > A) A = mk;
    if (mk >= H_lo && blocking < 0) blocking = k;
  }
  if (A >= H_lo)
    throw Error(ErrorCode::PrecisionExhausted,
                "cannot separate r(G) from h" +
                    (blocking >= 0 ? " (blocked by length " + std::to_string(blocking) + ")" : std::string(" (h/2 bound)")));
  // r_bound strictly inside (A, H_lo), on a dyadic grid
  Rat r;
  for (long bits = 8;; bits += 8) {
    r = round_up((A + H_lo) / 2, bits);
    if (r > A && r < H_lo) break;
  }
  GapResult res;
  res.r_bound = r;
  res.N = N;
  Rat eps = H_lo - r;
  Rat e = round_down(eps, 40);
  res.eps = e > 0 ? e : eps;
  return res;
}

GapResult gap_epsilon_bounded(const GeneratorSystem& sys, const RatInterval& lambda) {
  TailControl tc = sys.tail_control();
  if (tc.kind != Kind::BoundedGrowth)
    throw Error(ErrorCode::InvalidArgument, "gap_epsilon_bounded needs a BoundedGrowth system");
  long b = tc.bound;
  return gap_epsilon_from_growth(sys, lambda, [b](long) { return BigInt(b); }, 0);
}

}  // namespace codedshift
