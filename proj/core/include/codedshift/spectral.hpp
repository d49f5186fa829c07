#pragma once

#include <functional>
#include <vector>

#include "codedshift/generator_system.hpp"
#include "codedshift/rint.hpp"

namespace codedshift {

struct CharEvaluation {
  RatInterval lambda;
  RatInterval partial_value;  // f_N over the lambda interval
  Rat tail_bound;
  long terms_used = 0;        // length cutoff N
};

CharEvaluation char_eval(const GeneratorSystem& sys, const RatInterval& lambda, long N);

struct LambdaSolution {
  RatInterval lambda;
  long terms_used = 0;
  bool exact = false;  // lambda is an exact rational root
};

LambdaSolution solve_lambda_ex(const GeneratorSystem& sys, int n);
RatInterval solve_lambda(const GeneratorSystem& sys, int n);

RatInterval h_from_lambda(const RatInterval& lam, int n);

// Enclosure of log of the root of sum_{i<=m} lambda^-|g_i| = 1, lower endpoint
// on the 2^-(n+2) grid; [0,0] for the degenerate root 1.
RatInterval h_lower_finite(const GeneratorSystem& sys, std::size_t m, int n);

using KappaOracle = std::function<Rat(int)>;

// Nonincreasing upper bounds h_1 >= h_2 >= ... >= h_top.
std::vector<Rat> h_upper_search(const GeneratorSystem& sys, const KappaOracle& kappa, int steps);

}  // namespace codedshift
