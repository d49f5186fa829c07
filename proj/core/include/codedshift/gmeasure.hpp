#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "codedshift/generator_system.hpp"
#include "codedshift/rint.hpp"
#include "codedshift/symbolic.hpp"
#include "codedshift/verejones.hpp"

namespace codedshift {

enum class WeightMode { Mme, Custom };

// Certified lambda* and kappa of one system, refined on demand and cached.
class MmeConstants {
 public:
  explicit MmeConstants(std::shared_ptr<const GeneratorSystem> sys);
  // width < 2^-n, or an exact point
  RatInterval lambda(int n);
  RatInterval kappa(int n);

 private:
  std::shared_ptr<const GeneratorSystem> sys_;
  std::mutex mu_;
  std::optional<RatInterval> lambda_;
  bool lambda_exact_ = false;
  std::optional<RatInterval> kappa_;
  bool kappa_fixed_ = false;
};

struct GBernoulliSpec {
  std::shared_ptr<const GeneratorSystem> system;
  WeightMode mode = WeightMode::Mme;
  std::shared_ptr<MmeConstants> mme;
  // Custom mode: p_i for generators 1..ell, tail >= sum_{i>ell} |g_i| p_i, normalizer c
  std::vector<Rat> custom_p;
  Rat custom_tail;
  RatInterval custom_c;
};

GBernoulliSpec mme_spec(std::shared_ptr<const GeneratorSystem> sys);
GBernoulliSpec custom_spec(std::shared_ptr<const GeneratorSystem> sys, std::vector<Rat> p, Rat tail, RatInterval c);

// (1/c) prod p_g over the tuple (1-based generator indices)
RatInterval g_cylinder_measure(const GBernoulliSpec& spec, const std::vector<std::size_t>& tuple, int n = 40);

struct GCylinderTerm {
  std::vector<std::size_t> tuple;
  long offset = 0;  // start of w inside the first generator
  friend bool operator==(const GCylinderTerm&, const GCylinderTerm&) = default;
  friend auto operator<=>(const GCylinderTerm&, const GCylinderTerm&) = default;
};

// Every placement of w inside a generator concatenation, generators of length <= N,
// w overlapping each of them. Sorted.
std::vector<GCylinderTerm> enumerate_occurrences(const Word& w, const GeneratorSystem& sys, long N);

RatInterval cylinder_measure(const GBernoulliSpec& spec, const Word& w, int n);
// generator length cutoff behind cylinder_measure at precision n; 0 when closed forms are used
long cylinder_cutoff(const GBernoulliSpec& spec, const Word& w, int n);
// mu(sigma^-r [w]) for an invariant measure: independent of r
RatInterval noncentered_measure(const GBernoulliSpec& spec, const Word& w, long r, int n);

struct Atom {
  EpPoint point;
  Rat weight;
};

struct IdealMeasure {
  int alphabet_size = 0;
  std::optional<int> precision;  // n with W1(mu, this) < 2^-n, when known
  std::vector<Atom> atoms;
};

struct IdealMeasureStats {
  std::size_t level_size = 0;   // |L_{2N+1}|
  long N = 0;
  int precision_bits = 0;       // p with 2^-p <= 2^-n / (24 l)
  Rat leftover;                 // c_l
};

IdealMeasure ideal_measure(const GBernoulliSpec& spec, const LanguageOracle& lang, int n,
                           IdealMeasureStats* stats = nullptr);

// Throws ParseError on malformed input, InvalidArgument when the invariants fail.
std::string ideal_measure_to_json(const IdealMeasure& m);
IdealMeasure ideal_measure_from_json(const std::string& text);
void check_ideal_measure(const IdealMeasure& m);

// Exact W1 under metric_d. The metric is an ultrametric, so the optimal cost is the
// sum over centered windows of 2^-(j+2) |a(B) - b(B)|.
Rat w1_exact(const IdealMeasure& a, const IdealMeasure& b);
// Exact min-cost transport by successive shortest paths; small supports only.
Rat w1_transport(const IdealMeasure& a, const IdealMeasure& b);

// symbol <-> character used in JSON words: 0-9, a-z, A-Z, '+', '/'
std::string word_to_text(const Word& w);
Word word_from_text(const std::string& s);

}  // namespace codedshift
