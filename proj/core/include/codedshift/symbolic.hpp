#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "codedshift/rint.hpp"

namespace codedshift {

// A word is a byte string whose bytes are symbol values 0..d-1 (not ASCII digits).
using Word = std::string;
using Symbol = unsigned char;

inline Symbol sym(char c) { return static_cast<Symbol>(c); }
inline char to_char(int s) { return static_cast<char>(s); }

constexpr int kMaxAlphabet = 64;

// "0120" <-> {0,1,2,0}; only for alphabets of size <= 10.
Word word_from_digits(std::string_view digits);
std::string word_to_digits(const Word& w);
bool word_over_alphabet(const Word& w, int d);
Word make_word(std::initializer_list<int> syms);

// Bi-infinite eventually periodic sequence ... L L L center R R R ...
// Coordinate 0 sits at center[offset]; offsets outside [0, |center|) reach into the tails.
struct EpPoint {
  Word left;
  Word center;
  Word right;
  long offset = 0;

  Symbol at(long k) const;
  friend bool operator==(const EpPoint& a, const EpPoint& b);
};

EpPoint make_point(const Word& left, const Word& center, const Word& right, long offset);
// periodic point u^inf with coordinate 0 at u[shift mod |u|]
EpPoint periodic_point(const Word& u, long shift);

// min{|k| : x_k != y_k}, or nullopt when x == y
std::optional<long> first_difference(const EpPoint& x, const EpPoint& y);
Rat metric_d(const EpPoint& x, const EpPoint& y);

// Lexicographic order on the interleaved sequence x_0, x_1, x_-1, x_2, x_-2, ...
// Returns <0, 0, >0; when lcp is given it receives the number of equal leading
// interleaved symbols (unchanged when the points are equal).
int interleaved_compare(const EpPoint& x, const EpPoint& y, long* lcp = nullptr);

// All start positions of w inside v.
std::vector<std::size_t> occurrences(const Word& w, const Word& v);

struct SPResult {
  bool uniquely_decodable = true;
  Word witness;
  std::vector<Word> parse_a;
  std::vector<Word> parse_b;
};

SPResult sardinas_patterson(const std::vector<Word>& code);

// Exhaustive search over pairs of factorizations, shortest witness of length <= max_len.
std::optional<SPResult> brute_force_double_parse(const std::vector<Word>& code, long max_len);

class LanguageOracle {
 public:
  virtual ~LanguageOracle() = default;
  virtual int alphabet_size() const = 0;
  virtual bool member(const Word& w) const = 0;
  // Visits L_n(X) in lexicographic order. Default: depth-first over prefixes.
  virtual void for_each_level(int n, const std::function<void(const Word&)>& fn) const;
  std::vector<Word> enumerate_level(int n) const;
  std::size_t level_size(int n) const;
};

}  // namespace codedshift
