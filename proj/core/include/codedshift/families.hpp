#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "codedshift/generator_system.hpp"
#include "codedshift/int_set.hpp"
#include "codedshift/symbolic.hpp"
#include "codedshift/verejones.hpp"

namespace codedshift {

// ---- S-gap: G = {0^s 1 : s in S}
struct SGapSpec {
  IntSet S;
};

std::shared_ptr<GeneratorSystem> sgap_system(const SGapSpec& spec);
std::shared_ptr<LanguageOracle> sgap_language(const SGapSpec& spec);

// ---- generalized gap: pi(0)^s_pi(0) ... pi(d-1)^s_pi(d-1) d, terminator symbol d
struct GenGapSpec {
  int d = 1;
  std::vector<IntSet> S;              // S_0 .. S_{d-1}
  std::vector<std::vector<int>> Pi;   // permutations of 0..d-1
};

std::shared_ptr<GeneratorSystem> gengap_system(const GenGapSpec& spec);
std::shared_ptr<LanguageOracle> gengap_language(const GenGapSpec& spec);
// gap witness from the growth bound d! n^(d-1)
Rat gengap_epsilon(const GenGapSpec& spec, const RatInterval& lambda);

// ---- beta shifts, quasi-greedy expansion of 1 given as preperiod + period
struct BetaSpec {
  std::vector<int> preperiod;
  std::vector<int> period;
  int digit(long k) const;  // 1-based
};

std::shared_ptr<GeneratorSystem> beta_system(const BetaSpec& spec);
std::shared_ptr<LanguageOracle> beta_language(const BetaSpec& spec);

struct BetaRecovery {
  std::vector<int> digits;  // eps_1 .. eps_depth
  RatInterval beta;
};

BetaRecovery beta_recover(const GeneratorSystem& sys, int depth, int n = 20);

// ---- Dyck with two bracket types: ( = 0, [ = 1, ) = 2, ] = 3
enum class DyckVariant { OpenAugmented, CloseAugmented };

struct DyckSpec {
  DyckVariant variant = DyckVariant::OpenAugmented;
};

namespace dyck {
constexpr int kOpenRound = 0, kOpenSquare = 1, kCloseRound = 2, kCloseSquare = 3;
inline bool is_open(int s) { return s == kOpenRound || s == kOpenSquare; }
inline int partner(int s) { return (s + 2) % 4; }
// "([)]" <-> symbols
Word from_brackets(const std::string& s);
std::string to_brackets(const Word& w);
}  // namespace dyck

std::shared_ptr<GeneratorSystem> dyck_system(const DyckSpec& spec, long maxlen = 24);
std::shared_ptr<LanguageOracle> dyck_language();

// ---- the counterexample pair
std::shared_ptr<GeneratorSystem> example51_system();
// N odd >= 3; enumeration stops with BudgetExceeded past cap_length
std::shared_ptr<GeneratorSystem> example51_modified(long N, long cap_length = 48);
// N0 = nullopt: language of the base system
std::shared_ptr<LanguageOracle> example51_language(std::optional<long> N0 = std::nullopt);

// closed form of the modified characteristic sum in x = 1/lambda
Rat example51_modified_char(long N0, const Rat& x);
// 4x^2/(1-x^2)^2 + 1/(2(1-x^2))
Rat example51_gate(const Rat& x);

struct GateAttempt {
  long N0 = 0;
  RatInterval gate;
  bool certified = false;
};

struct DemoReport {
  long N0 = 0;
  std::vector<GateAttempt> attempts;
  RatInterval gate;            // enclosure of the gate expression at the modified root
  KappaCertificate kappa_base;
  RatInterval x_prime;         // root of the modified characteristic sum, x = 1/lambda'
  RatInterval lambda_prime;
  Rat kappa_prime_lower;       // lower bound for kappa(G') via x F'(x)
  Rat separation_lower;        // kappa_prime_lower - kappa_base.hi
  bool separated = false;
  std::size_t generators_agree = 0;   // first M generators identical
  std::size_t generators_compared = 0;
  long levels_agree = 0;              // L_n equal for all n <= levels_agree
  std::vector<std::size_t> level_sizes;
};

DemoReport kappa_separation_demo(std::optional<long> N0, int n);

}  // namespace codedshift
