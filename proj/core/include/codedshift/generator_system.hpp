#pragma once

#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "codedshift/rint.hpp"
#include "codedshift/symbolic.hpp"

namespace codedshift {

struct TailControl {
  enum class Kind { Finite, BoundedGrowth, GapEpsilon, PolynomialGrowth, None };
  Kind kind = Kind::None;
  BigInt count;      // Finite
  long bound = 0;    // BoundedGrowth: |G_k| <= bound; PolynomialGrowth: |G_k| <= bound * k^degree
  long degree = 0;   // PolynomialGrowth
  Rat eps;           // GapEpsilon: h - r(G) > eps

  static TailControl finite(const BigInt& count);
  static TailControl bounded(long b);
  static TailControl gap(const Rat& eps);
  static TailControl polynomial(long c, long degree);
  static TailControl none();
};

std::string to_string(const TailControl& tc);

struct DeclaredConstant {
  RatInterval value;
  std::string provenance;  // "paper" | "user"
};

using DeclaredMap = std::map<std::string, DeclaredConstant>;

// Exact generator-weight sums at p_g = x^|g| for one fixed x, where a family knows them
// in closed form: pre(v) = sum over g starting with v, suf(u) = sum over g ending with u,
// inner(w) = sum over g of (occurrences of w in g) * p_g.
class ExactSeries {
 public:
  virtual ~ExactSeries() = default;
  virtual Rat pre(const Word& v) const = 0;
  virtual Rat suf(const Word& u) const = 0;
  virtual Rat inner(const Word& w) const = 0;
};

struct Violation {
  std::size_t index = 0;
  std::string reason;
};

// Enumerable generating set g_1, g_2, ... in nondecreasing length.
// Enumeration is memoized and validated on access; concurrent readers are safe.
class GeneratorSystem {
 public:
  explicit GeneratorSystem(int alphabet_size);
  virtual ~GeneratorSystem() = default;
  GeneratorSystem(const GeneratorSystem&) = delete;
  GeneratorSystem& operator=(const GeneratorSystem&) = delete;

  int alphabet_size() const { return d_; }
  virtual std::string name() const = 0;
  virtual TailControl tail_control() const = 0;
  virtual DeclaredMap declared() const { return {}; }

  bool is_finite() const { return tail_control().kind == TailControl::Kind::Finite; }

  // 1-based. Throws OracleViolation on a contract breach, InvalidArgument past the end.
  const Word& generator(std::size_t i) const;
  // nullopt past the end of a finite system.
  std::optional<Word> try_generator(std::size_t i) const;
  // number of generators of length <= k (enumerates)
  std::size_t count_up_to_length(long k) const;
  std::vector<Word> generators_of_length(long k) const;
  bool is_generator(const Word& w) const;

  // |G_k| for k = 0..K (index 0 unused, always 0). Default enumerates.
  virtual std::vector<BigInt> counts_up_to(long K) const;
  // Longest generator length for finite systems.
  long max_length() const;
  // Shortest generator length.
  long min_length() const;

  // A concatenation of generators containing w, with the start of w inside it.
  // Families with a direct construction override this; gmeasure falls back to search.
  virtual std::optional<std::pair<Word, long>> direct_witness(const Word&) const { return std::nullopt; }
  virtual std::shared_ptr<const ExactSeries> exact_series(const Rat& /*x*/) const { return nullptr; }

 protected:
  // Produce g_i (called with i = 1, 2, ... in order, under a lock). nullopt ends a finite system.
  virtual std::optional<Word> produce(std::size_t i) = 0;
  // Membership test without enumeration, if the family can decide it.
  virtual std::optional<bool> decide_generator(const Word&) const { return std::nullopt; }
  // Largest L such that every generator of length <= L has been produced, or -1.
  // Called under the lock.
  virtual long produced_through() const { return -1; }

 private:
  void extend_to(std::size_t i) const;
  void extend_to_length(long k) const;

  int d_;
  mutable std::shared_mutex mu_;
  mutable std::deque<Word> memo_;
  mutable std::unordered_set<Word> seen_;
  mutable std::unordered_map<long, long> per_length_;
  mutable bool exhausted_ = false;
  mutable std::optional<Violation> poisoned_;
};

struct ValidationReport {
  bool ok = true;
  std::size_t checked = 0;
  std::optional<Violation> violation;
};

ValidationReport validate_oracle_prefix(const GeneratorSystem& sys, std::size_t count);

// Finite list of words, checked on construction order. Used for custom codes and tests.
class ListSystem : public GeneratorSystem {
 public:
  ListSystem(int d, std::vector<Word> words, std::optional<TailControl> tc = std::nullopt,
             std::string name = "list");
  std::string name() const override { return name_; }
  TailControl tail_control() const override;

 protected:
  std::optional<Word> produce(std::size_t i) override;

 private:
  std::vector<Word> words_;
  std::optional<TailControl> tc_;
  std::string name_;
};

// Builds generators length by length. Subclasses list all generators of one length.
class ByLengthSystem : public GeneratorSystem {
 public:
  using GeneratorSystem::GeneratorSystem;

 protected:
  // all generators of length k in a fixed order
  virtual std::vector<Word> words_of_length(long k) = 0;
  // a length beyond which no generators exist (finite systems), or -1
  virtual long last_length() const { return -1; }
  std::optional<Word> produce(std::size_t i) override;
  long produced_through() const override { return pos_ >= buf_.size() ? cur_len_ : cur_len_ - 1; }

 private:
  long cur_len_ = 0;
  std::vector<Word> buf_;
  std::size_t pos_ = 0;
  std::size_t empty_run_ = 0;
};

}  // namespace codedshift
