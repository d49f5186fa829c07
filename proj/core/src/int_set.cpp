#include "codedshift/int_set.hpp"

#include <algorithm>

#include "codedshift/errors.hpp"

namespace codedshift {

static void normalize(std::vector<long>& v) {
  for (long x : v)
    if (x < 0) throw Error(ErrorCode::InvalidArgument, "integer sets live in {0,1,2,...}");
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

IntSet IntSet::explicit_values(std::vector<long> values) {
  IntSet s;
  s.kind_ = Kind::Explicit;
  normalize(values);
  s.values_ = std::move(values);
  return s;
}

IntSet IntSet::arithmetic(long a, long b) {
  if (a < 0 || b < 0) throw Error(ErrorCode::InvalidArgument, "arithmetic set needs a, b >= 0");
  IntSet s;
  s.kind_ = Kind::Arithmetic;
  s.a_ = a;
  s.b_ = b;
  return s;
}

IntSet IntSet::cofinite(std::vector<long> excluded) {
  IntSet s;
  s.kind_ = Kind::Cofinite;
  normalize(excluded);
  s.values_ = std::move(excluded);
  return s;
}

IntSet IntSet::periodic(std::vector<int> preperiod, std::vector<int> period) {
  if (period.empty()) throw Error(ErrorCode::InvalidArgument, "periodic set needs a nonempty period");
  for (int x : preperiod)
    if (x != 0 && x != 1) throw Error(ErrorCode::InvalidArgument, "characteristic entries must be 0 or 1");
  for (int x : period)
    if (x != 0 && x != 1) throw Error(ErrorCode::InvalidArgument, "characteristic entries must be 0 or 1");
  IntSet s;
  s.kind_ = Kind::Periodic;
  s.pre_ = std::move(preperiod);
  s.per_ = std::move(period);
  return s;
}

bool IntSet::contains(long s) const {
  if (s < 0) return false;
  switch (kind_) {
    case Kind::Explicit: return std::binary_search(values_.begin(), values_.end(), s);
    case Kind::Cofinite: return !std::binary_search(values_.begin(), values_.end(), s);
    case Kind::Arithmetic: return b_ == 0 ? s == a_ : (s >= a_ && (s - a_) % b_ == 0);
    case Kind::Periodic: {
      long p = static_cast<long>(pre_.size());
      if (s < p) return pre_[s] == 1;
      return per_[(s - p) % static_cast<long>(per_.size())] == 1;
    }
  }
  return false;
}

std::optional<long> IntSet::next_at_least(long s) const {
  s = std::max(s, 0L);
  switch (kind_) {
    case Kind::Explicit: {
      auto it = std::lower_bound(values_.begin(), values_.end(), s);
      if (it == values_.end()) return std::nullopt;
      return *it;
    }
    case Kind::Cofinite:
      while (std::binary_search(values_.begin(), values_.end(), s)) ++s;
      return s;
    case Kind::Arithmetic:
      if (s <= a_) return a_;
      if (b_ == 0) return std::nullopt;
      return a_ + ((s - a_ + b_ - 1) / b_) * b_;
    case Kind::Periodic: {
      long limit = std::max<long>(s, static_cast<long>(pre_.size())) + static_cast<long>(per_.size());
      for (long t = s; t <= limit; ++t)
        if (contains(t)) return t;
      return std::nullopt;
    }
  }
  return std::nullopt;
}

bool IntSet::is_finite() const {
  switch (kind_) {
    case Kind::Explicit: return true;
    case Kind::Cofinite: return false;
    case Kind::Arithmetic: return b_ == 0;
    case Kind::Periodic: return std::find(per_.begin(), per_.end(), 1) == per_.end();
  }
  return true;
}

std::optional<long> IntSet::max() const {
  if (!is_finite()) return std::nullopt;
  switch (kind_) {
    case Kind::Explicit:
      if (values_.empty()) return std::nullopt;
      return values_.back();
    case Kind::Arithmetic: return a_;
    case Kind::Periodic:
      for (long i = static_cast<long>(pre_.size()) - 1; i >= 0; --i)
        if (pre_[i] == 1) return i;
      return std::nullopt;
    default: return std::nullopt;
  }
}

std::vector<long> IntSet::elements_up_to(long bound) const {
  std::vector<long> out;
  for (auto s = next_at_least(0); s && *s <= bound; s = next_at_least(*s + 1)) out.push_back(*s);
  return out;
}

static std::string join(const std::vector<long>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

std::string IntSet::describe() const {
  switch (kind_) {
    case Kind::Explicit: return "{" + join(values_) + "}";
    case Kind::Cofinite: return values_.empty() ? "N0" : "N0\\{" + join(values_) + "}";
    case Kind::Arithmetic: return std::to_string(a_) + "+" + std::to_string(b_) + "k";
    case Kind::Periodic: {
      std::string s = "chi=";
      for (int x : pre_) s += std::to_string(x);
      s += "(";
      for (int x : per_) s += std::to_string(x);
      return s + ")*";
    }
  }
  return "?";
}

}  // namespace codedshift
