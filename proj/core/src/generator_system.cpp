#include "codedshift/generator_system.hpp"

#include <mutex>

#include "codedshift/errors.hpp"

namespace codedshift {

TailControl TailControl::finite(const BigInt& count) {
  TailControl t;
  t.kind = Kind::Finite;
  t.count = count;
  return t;
}

TailControl TailControl::bounded(long b) {
  TailControl t;
  t.kind = Kind::BoundedGrowth;
  t.bound = b;
  return t;
}

TailControl TailControl::gap(const Rat& eps) {
  if (eps <= 0) throw Error(ErrorCode::InvalidArgument, "GapEpsilon needs eps > 0");
  TailControl t;
  t.kind = Kind::GapEpsilon;
  t.eps = eps;
  return t;
}

TailControl TailControl::polynomial(long c, long degree) {
  TailControl t;
  t.kind = Kind::PolynomialGrowth;
  t.bound = c;
  t.degree = degree;
  return t;
}

TailControl TailControl::none() { return TailControl{}; }

std::string to_string(const TailControl& tc) {
  switch (tc.kind) {
    case TailControl::Kind::Finite: return "Finite(" + tc.count.get_str() + ")";
    case TailControl::Kind::BoundedGrowth: return "BoundedGrowth(" + std::to_string(tc.bound) + ")";
    case TailControl::Kind::GapEpsilon: return "GapEpsilon(" + to_string(tc.eps) + ")";
    case TailControl::Kind::PolynomialGrowth:
      return "PolynomialGrowth(" + std::to_string(tc.bound) + "*k^" + std::to_string(tc.degree) + ")";
    case TailControl::Kind::None: return "None";
  }
  return "?";
}

GeneratorSystem::GeneratorSystem(int alphabet_size) : d_(alphabet_size) {
  if (d_ < 1 || d_ > kMaxAlphabet) throw Error(ErrorCode::InvalidArgument, "alphabet size must be in 1..64");
}

static BigInt ipow(long base, long e) {
  BigInt r;
  mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(base), static_cast<unsigned long>(e));
  return r;
}

// caller holds the unique lock
void GeneratorSystem::extend_to(std::size_t i) const {
  auto* self = const_cast<GeneratorSystem*>(this);
  while (memo_.size() < i && !exhausted_) {
    if (poisoned_) break;
    std::size_t idx = memo_.size() + 1;
    std::optional<Word> w = self->produce(idx);
    TailControl tc = tail_control();
    auto fail = [&](const std::string& why) {
      poisoned_ = Violation{idx, why};
    };
    if (!w) {
      exhausted_ = true;
      if (tc.kind == TailControl::Kind::Finite && tc.count != BigInt(memo_.size()))
        fail("finite system ended after " + std::to_string(memo_.size()) + " generators, declared " +
             tc.count.get_str());
      else if (tc.kind != TailControl::Kind::Finite)
        fail("enumeration ended but the system is not declared finite");
      break;
    }
    long len = static_cast<long>(w->size());
    if (len == 0) {
      fail("empty generator");
    } else if (!word_over_alphabet(*w, d_)) {
      fail("symbol outside alphabet of size " + std::to_string(d_));
    } else if (!memo_.empty() && len < static_cast<long>(memo_.back().size())) {
      fail("length decreased from " + std::to_string(memo_.back().size()) + " to " + std::to_string(len));
    } else if (seen_.count(*w)) {
      fail("duplicate generator");
    } else {
      long cnt = ++per_length_[len];
      if (tc.kind == TailControl::Kind::BoundedGrowth && cnt > tc.bound)
        fail("more than " + std::to_string(tc.bound) + " generators of length " + std::to_string(len));
      else if (tc.kind == TailControl::Kind::PolynomialGrowth && BigInt(cnt) > tc.bound * ipow(len, tc.degree))
        fail("polynomial growth bound exceeded at length " + std::to_string(len));
      else if (tc.kind == TailControl::Kind::Finite && BigInt(memo_.size() + 1) > tc.count)
        fail("more generators than the declared finite count");
    }
    if (poisoned_) break;
    seen_.insert(*w);
    memo_.push_back(std::move(*w));
  }
}

static Error violation_error(const Violation& v) {
  return Error(ErrorCode::OracleViolation, "generator " + std::to_string(v.index) + ": " + v.reason);
}

std::optional<Word> GeneratorSystem::try_generator(std::size_t i) const {
  if (i == 0) throw Error(ErrorCode::InvalidArgument, "generator indices start at 1");
  {
    std::shared_lock lk(mu_);
    if (i <= memo_.size()) return memo_[i - 1];
    if (poisoned_ && poisoned_->index <= i) throw violation_error(*poisoned_);
    if (exhausted_) return std::nullopt;
  }
  std::unique_lock lk(mu_);
  extend_to(i);
  if (i <= memo_.size()) return memo_[i - 1];
  if (poisoned_) throw violation_error(*poisoned_);
  return std::nullopt;
}

const Word& GeneratorSystem::generator(std::size_t i) const {
  if (i == 0) throw Error(ErrorCode::InvalidArgument, "generator indices start at 1");
  {
    std::shared_lock lk(mu_);
    if (i <= memo_.size()) return memo_[i - 1];
  }
  std::unique_lock lk(mu_);
  extend_to(i);
  if (i <= memo_.size()) return memo_[i - 1];
  if (poisoned_) throw violation_error(*poisoned_);
  throw Error(ErrorCode::InvalidArgument, "generator index " + std::to_string(i) + " past the end of a finite system");
}

// caller holds the unique lock
void GeneratorSystem::extend_to_length(long k) const {
  while (!exhausted_ && !poisoned_ && (memo_.empty() || static_cast<long>(memo_.back().size()) <= k) &&
         produced_through() < k)
    extend_to(memo_.size() + 1);
}

std::size_t GeneratorSystem::count_up_to_length(long k) const {
  {
    std::shared_lock lk(mu_);
    if (exhausted_ || (!memo_.empty() && static_cast<long>(memo_.back().size()) > k) || produced_through() >= k) {
      std::size_t n = memo_.size();
      while (n > 0 && static_cast<long>(memo_[n - 1].size()) > k) --n;
      return n;
    }
  }
  std::unique_lock lk(mu_);
  extend_to_length(k);
  if (poisoned_ && (memo_.empty() || static_cast<long>(memo_.back().size()) <= k)) throw violation_error(*poisoned_);
  std::size_t n = memo_.size();
  while (n > 0 && static_cast<long>(memo_[n - 1].size()) > k) --n;
  return n;
}

std::vector<Word> GeneratorSystem::generators_of_length(long k) const {
  std::size_t hi = count_up_to_length(k);
  std::size_t lo = count_up_to_length(k - 1);
  std::vector<Word> out;
  for (std::size_t i = lo + 1; i <= hi; ++i) out.push_back(generator(i));
  return out;
}

bool GeneratorSystem::is_generator(const Word& w) const {
  if (auto r = decide_generator(w)) return *r;
  count_up_to_length(static_cast<long>(w.size()));
  std::shared_lock lk(mu_);
  return seen_.count(w) > 0;
}

std::vector<BigInt> GeneratorSystem::counts_up_to(long K) const {
  std::vector<BigInt> c(static_cast<std::size_t>(K + 1), BigInt(0));
  std::size_t n = count_up_to_length(K);
  for (std::size_t i = 1; i <= n; ++i) c[generator(i).size()] += 1;
  return c;
}

long GeneratorSystem::max_length() const {
  if (!is_finite()) throw Error(ErrorCode::InvalidArgument, "max_length of an infinite system");
  std::size_t n = tail_control().count.get_ui();
  if (n == 0) return 0;
  return static_cast<long>(generator(n).size());
}

long GeneratorSystem::min_length() const { return static_cast<long>(generator(1).size()); }

ValidationReport validate_oracle_prefix(const GeneratorSystem& sys, std::size_t count) {
  if (count < 1) throw Error(ErrorCode::InvalidArgument, "count must be >= 1");
  ValidationReport r;
  try {
    for (std::size_t i = 1; i <= count; ++i) {
      if (!sys.try_generator(i)) break;
      r.checked = i;
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::BudgetExceeded) return r;
    if (e.code() != ErrorCode::OracleViolation) throw;
    r.ok = false;
    Violation v{r.checked + 1, e.what()};
    r.violation = v;
  }
  return r;
}

ListSystem::ListSystem(int d, std::vector<Word> words, std::optional<TailControl> tc, std::string name)
    : GeneratorSystem(d), words_(std::move(words)), tc_(std::move(tc)), name_(std::move(name)) {
  if (words_.empty()) throw Error(ErrorCode::EmptyCode, "generator list is empty");
}

TailControl ListSystem::tail_control() const {
  if (tc_) return *tc_;
  return TailControl::finite(BigInt(static_cast<unsigned long>(words_.size())));
}

std::optional<Word> ListSystem::produce(std::size_t i) {
  if (i > words_.size()) return std::nullopt;
  return words_[i - 1];
}

std::optional<Word> ByLengthSystem::produce(std::size_t) {
  while (pos_ >= buf_.size()) {
    ++cur_len_;
    long last = last_length();
    if (last >= 0 && cur_len_ > last) return std::nullopt;
    buf_ = words_of_length(cur_len_);
    pos_ = 0;
    if (buf_.empty()) {
      if (++empty_run_ > 100000) throw Error(ErrorCode::BudgetExceeded, "no generators in 100000 consecutive lengths");
    } else {
      empty_run_ = 0;
    }
  }
  return buf_[pos_++];
}

}  // namespace codedshift
