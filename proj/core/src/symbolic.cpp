#include "codedshift/symbolic.hpp"

#include <map>
#include <numeric>
#include <queue>
#include <set>
#include <tuple>
#include <unordered_set>

#include "codedshift/errors.hpp"

namespace codedshift {

Word word_from_digits(std::string_view digits) {
  Word w;
  w.reserve(digits.size());
  for (char c : digits) {
    if (c < '0' || c > '9') throw Error(ErrorCode::ParseError, "non-digit symbol in word");
    w.push_back(to_char(c - '0'));
  }
  return w;
}

std::string word_to_digits(const Word& w) {
  std::string s;
  s.reserve(w.size());
  for (char c : w) {
    if (sym(c) > 9) throw Error(ErrorCode::InvalidArgument, "symbol does not fit a digit");
    s.push_back(static_cast<char>('0' + sym(c)));
  }
  return s;
}

bool word_over_alphabet(const Word& w, int d) {
  for (char c : w)
    if (sym(c) >= d) return false;
  return true;
}

Word make_word(std::initializer_list<int> syms) {
  Word w;
  for (int s : syms) w.push_back(to_char(s));
  return w;
}

static long floor_mod(long a, long m) {
  long r = a % m;
  return r < 0 ? r + m : r;
}

Symbol EpPoint::at(long k) const {
  long p = k + offset;
  long c = static_cast<long>(center.size());
  if (p >= 0 && p < c) return sym(center[p]);
  if (p >= c) return sym(right[floor_mod(p - c, static_cast<long>(right.size()))]);
  long l = static_cast<long>(left.size());
  return sym(left[l - 1 - floor_mod(-p - 1, l)]);
}

EpPoint make_point(const Word& left, const Word& center, const Word& right, long offset) {
  if (left.empty() || right.empty()) throw Error(ErrorCode::InvalidArgument, "EpPoint periods must be nonempty");
  return EpPoint{left, center, right, offset};
}

EpPoint periodic_point(const Word& u, long shift) {
  if (u.empty()) throw Error(ErrorCode::InvalidArgument, "empty period");
  long n = static_cast<long>(u.size());
  return EpPoint{u, Word(), u, floor_mod(shift, n)};
}

static long extent(const EpPoint& x) {
  long c = static_cast<long>(x.center.size());
  return std::max({c - x.offset, x.offset, 0L}) + 1;
}

static long scan_bound(const EpPoint& x, const EpPoint& y) {
  long e = std::max(extent(x), extent(y));
  long lr = std::lcm(static_cast<long>(x.right.size()), static_cast<long>(y.right.size()));
  long ll = std::lcm(static_cast<long>(x.left.size()), static_cast<long>(y.left.size()));
  return e + std::max(lr, ll);
}

std::optional<long> first_difference(const EpPoint& x, const EpPoint& y) {
  long K = scan_bound(x, y);
  for (long m = 0; m <= K; ++m) {
    if (x.at(m) != y.at(m) || x.at(-m) != y.at(-m)) return m;
  }
  return std::nullopt;
}

bool operator==(const EpPoint& a, const EpPoint& b) { return !first_difference(a, b).has_value(); }

Rat metric_d(const EpPoint& x, const EpPoint& y) {
  auto m = first_difference(x, y);
  if (!m) return Rat(0);
  return pow2(-*m);
}

int interleaved_compare(const EpPoint& x, const EpPoint& y, long* lcp) {
  long K = scan_bound(x, y);
  for (long t = 0; t <= 2 * K + 1; ++t) {
    long k = (t == 0) ? 0 : ((t % 2 == 1) ? (t + 1) / 2 : -(t / 2));
    Symbol a = x.at(k), b = y.at(k);
    if (a != b) {
      if (lcp) *lcp = t;
      return a < b ? -1 : 1;
    }
  }
  return 0;
}

std::vector<std::size_t> occurrences(const Word& w, const Word& v) {
  std::vector<std::size_t> out;
  if (w.empty() || w.size() > v.size()) return out;
  std::size_t pos = v.find(w, 0);
  while (pos != Word::npos) {
    out.push_back(pos);
    pos = v.find(w, pos + 1);
  }
  return out;
}

static void check_code(const std::vector<Word>& code) {
  if (code.empty()) throw Error(ErrorCode::EmptyCode, "code is empty");
  std::set<Word> seen;
  for (const auto& c : code) {
    if (c.empty()) throw Error(ErrorCode::InvalidArgument, "empty codeword");
    if (!seen.insert(c).second) throw Error(ErrorCode::DuplicateGenerator, "duplicate codeword");
  }
}

namespace {

// Two partial parses where concat(ahead) = concat(behind) + dangling.
struct ParsePair {
  std::vector<int> ahead;
  std::vector<int> behind;
  Word dangling;
  long length = 0;  // |concat(ahead)|
};

bool has_prefix(const Word& s, const Word& p) {
  return p.size() <= s.size() && s.compare(0, p.size(), p) == 0;
}

SPResult finish(const std::vector<Word>& code, const ParsePair& p, int last) {
  SPResult r;
  r.uniquely_decodable = false;
  for (int i : p.ahead) r.parse_a.push_back(code[i]);
  for (int i : p.behind) r.parse_b.push_back(code[i]);
  r.parse_b.push_back(code[last]);
  for (const auto& c : r.parse_a) r.witness += c;
  // order the parses so that parse_a starts with the shorter first word
  if (r.parse_a.front().size() > r.parse_b.front().size()) std::swap(r.parse_a, r.parse_b);
  return r;
}

struct Cmp {
  bool operator()(const ParsePair& a, const ParsePair& b) const {
    return std::tie(a.length, a.dangling) > std::tie(b.length, b.dangling);
  }
};

}  // namespace

SPResult sardinas_patterson(const std::vector<Word>& code) {
  check_code(code);
  const int m = static_cast<int>(code.size());
  // Dijkstra over dangling suffixes, priority = length of the longer parse.
  std::priority_queue<ParsePair, std::vector<ParsePair>, Cmp> pq;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      if (i != j && code[j].size() < code[i].size() && has_prefix(code[i], code[j]))
        pq.push(ParsePair{{i}, {j}, code[i].substr(code[j].size()), static_cast<long>(code[i].size())});
  std::set<Word> done;
  while (!pq.empty()) {
    ParsePair p = pq.top();
    pq.pop();
    if (!done.insert(p.dangling).second) continue;
    for (int c = 0; c < m; ++c) {
      const Word& w = code[c];
      if (w == p.dangling) return finish(code, p, c);
      if (w.size() > p.dangling.size() && has_prefix(w, p.dangling)) {
        ParsePair q;
        q.ahead = p.behind;
        q.ahead.push_back(c);
        q.behind = p.ahead;
        q.dangling = w.substr(p.dangling.size());
        q.length = p.length + static_cast<long>(q.dangling.size());
        if (!done.count(q.dangling)) pq.push(std::move(q));
      } else if (w.size() < p.dangling.size() && has_prefix(p.dangling, w)) {
        ParsePair q = p;
        q.behind.push_back(c);
        q.dangling = p.dangling.substr(w.size());
        if (!done.count(q.dangling)) pq.push(std::move(q));
      }
    }
  }
  return SPResult{};
}

std::optional<SPResult> brute_force_double_parse(const std::vector<Word>& code, long max_len) {
  check_code(code);
  if (max_len < 1) throw Error(ErrorCode::InvalidArgument, "max_len must be >= 1");
  const int m = static_cast<int>(code.size());
  // Breadth-first by total length over explicit pairs of parses. A pair state is
  // (dangling word, length); repeated states reached at the same length are pruned.
  std::map<long, std::vector<ParsePair>> layers;
  std::set<std::pair<Word, long>> seen;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      if (i == j || code[j].size() >= code[i].size() || !has_prefix(code[i], code[j])) continue;
      long len = static_cast<long>(code[i].size());
      if (len > max_len) continue;
      layers[len].push_back(ParsePair{{i}, {j}, code[i].substr(code[j].size()), len});
    }
  while (!layers.empty()) {
    auto it = layers.begin();
    std::vector<ParsePair> stack = std::move(it->second);
    layers.erase(it);
    while (!stack.empty()) {
      ParsePair p = std::move(stack.back());
      stack.pop_back();
      if (!seen.insert({p.dangling, p.length}).second) continue;
      for (int c = 0; c < m; ++c) {
        const Word& w = code[c];
        if (w == p.dangling) return finish(code, p, c);
        if (w.size() > p.dangling.size() && has_prefix(w, p.dangling)) {
          ParsePair q;
          q.ahead = p.behind;
          q.ahead.push_back(c);
          q.behind = p.ahead;
          q.dangling = w.substr(p.dangling.size());
          q.length = p.length + static_cast<long>(q.dangling.size());
          if (q.length <= max_len) layers[q.length].push_back(std::move(q));
        } else if (w.size() < p.dangling.size() && has_prefix(p.dangling, w)) {
          ParsePair q = p;
          q.behind.push_back(c);
          q.dangling = p.dangling.substr(w.size());
          stack.push_back(std::move(q));
        }
      }
    }
  }
  return std::nullopt;
}

void LanguageOracle::for_each_level(int n, const std::function<void(const Word&)>& fn) const {
  if (n <= 0) return;
  const int d = alphabet_size();
  Word w;
  w.reserve(n);
  // iterative DFS; prefixes of members are members (factor closure)
  std::vector<int> next;
  next.push_back(0);
  w.push_back(0);
  while (!w.empty()) {
    int& s = next.back();
    if (s >= d) {
      next.pop_back();
      w.pop_back();
      continue;
    }
    w.back() = to_char(s);
    ++s;
    if (!member(w)) continue;
    if (static_cast<int>(w.size()) == n) {
      fn(w);
    } else {
      w.push_back(0);
      next.push_back(0);
    }
  }
}

std::vector<Word> LanguageOracle::enumerate_level(int n) const {
  std::vector<Word> out;
  for_each_level(n, [&](const Word& w) { out.push_back(w); });
  return out;
}

std::size_t LanguageOracle::level_size(int n) const {
  std::size_t k = 0;
  for_each_level(n, [&](const Word&) { ++k; });
  return k;
}

}  // namespace codedshift
