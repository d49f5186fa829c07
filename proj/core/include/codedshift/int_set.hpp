#pragma once

#include <optional>
#include <string>
#include <vector>

namespace codedshift {

// Decidable subset of {0, 1, 2, ...}.
class IntSet {
 public:
  enum class Kind { Explicit, Arithmetic, Cofinite, Periodic };

  static IntSet explicit_values(std::vector<long> values);
  // {a + b k : k >= 0}; b = 0 gives {a}
  static IntSet arithmetic(long a, long b);
  // everything except the listed values
  static IntSet cofinite(std::vector<long> excluded);
  // characteristic sequence pre[0..] then period repeated (entries 0/1)
  static IntSet periodic(std::vector<int> preperiod, std::vector<int> period);
  static IntSet naturals() { return cofinite({}); }

  Kind kind() const { return kind_; }
  bool contains(long s) const;
  // least element >= s
  std::optional<long> next_at_least(long s) const;
  bool is_finite() const;
  bool empty() const { return !next_at_least(0).has_value(); }
  // finite sets only
  std::optional<long> max() const;
  std::vector<long> elements_up_to(long bound) const;
  std::string describe() const;

 private:
  Kind kind_ = Kind::Explicit;
  std::vector<long> values_;  // explicit (sorted) / cofinite exclusions (sorted)
  long a_ = 0, b_ = 0;
  std::vector<int> pre_, per_;
};

}  // namespace codedshift
