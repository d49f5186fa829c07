#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "codedshift/generator_system.hpp"
#include "codedshift/gmeasure.hpp"
#include "codedshift/symbolic.hpp"

namespace codedshift::cli {

struct CustomWeights {
  std::vector<Rat> p;
  Rat tail;
  RatInterval c;
};

struct LoadedSystem {
  std::string family;
  std::shared_ptr<const GeneratorSystem> system;
  std::shared_ptr<const LanguageOracle> language;  // null for custom systems
  std::optional<CustomWeights> weights;
};

// Throws ParseError for malformed documents and TailNotBoundable for infinite custom
// systems without tail control.
LoadedSystem load_system_text(const std::string& text);
LoadedSystem load_system_file(const std::string& path);

// Word syntax: bracket notation for dyck, otherwise one character per symbol (0-9a-zA-Z+/).
Word parse_word(const LoadedSystem& s, const std::string& text);
std::string show_word(const LoadedSystem& s, const Word& w);

std::string read_file(const std::string& path);

}  // namespace codedshift::cli
