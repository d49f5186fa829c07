#include "system_file.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

#include "codedshift/errors.hpp"
#include "codedshift/families.hpp"
#include "codedshift/int_set.hpp"

namespace codedshift::cli {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& msg) { throw Error(ErrorCode::ParseError, msg); }

Rat rat_of(const json& j) {
  if (j.is_string()) return parse_rat(j.get<std::string>());
  if (j.is_number_integer()) return Rat(j.get<long>());
  bad("expected a rational as a string or an integer, got " + j.dump());
}

RatInterval interval_of(const json& j) {
  if (j.is_array()) {
    if (j.size() != 2) bad("interval needs [lo, hi]");
    RatInterval r(rat_of(j[0]), rat_of(j[1]));
    return r;
  }
  return RatInterval(rat_of(j));
}

std::vector<long> longs_of(const json& j) {
  if (!j.is_array()) bad("expected an integer array");
  std::vector<long> v;
  for (const auto& x : j) v.push_back(x.get<long>());
  return v;
}

std::vector<int> ints_of(const json& j) {
  if (!j.is_array()) bad("expected an integer array");
  std::vector<int> v;
  for (const auto& x : j) v.push_back(x.get<int>());
  return v;
}

IntSet intset_of(const json& j) {
  if (j.is_array()) return IntSet::explicit_values(longs_of(j));
  std::string t = j.at("type").get<std::string>();
  if (t == "explicit") return IntSet::explicit_values(longs_of(j.at("values")));
  if (t == "arithmetic") return IntSet::arithmetic(j.at("a").get<long>(), j.at("b").get<long>());
  if (t == "cofinite") return IntSet::cofinite(j.contains("excluded") ? longs_of(j["excluded"]) : std::vector<long>{});
  if (t == "periodic") return IntSet::periodic(j.contains("preperiod") ? ints_of(j["preperiod"]) : std::vector<int>{},
                                               ints_of(j.at("period")));
  bad("unknown integer set type '" + t + "'");
}

std::optional<TailControl> tail_of(const json& doc) {
  if (!doc.contains("tail_control")) return std::nullopt;
  const json& j = doc["tail_control"];
  std::string k = j.at("kind").get<std::string>();
  if (k == "finite") return TailControl::finite(BigInt(0));
  if (k == "bounded") return TailControl::bounded(j.at("b").get<long>());
  if (k == "gap") return TailControl::gap(rat_of(j.at("eps")));
  if (k == "none") return TailControl::none();
  bad("unknown tail_control kind '" + k + "'");
}

struct Pattern {
  Word prefix, repeat, suffix;
  IntSet k;
};

// explicit words plus families prefix repeat^k suffix
class CustomSystem : public ByLengthSystem {
 public:
  CustomSystem(int d, std::vector<Word> words, std::vector<Pattern> pats, std::optional<TailControl> tc)
      : ByLengthSystem(d), words_(std::move(words)), pats_(std::move(pats)) {
    finite_ = true;
    for (const auto& p : pats_)
      if (!p.k.is_finite()) finite_ = false;
    if (finite_) {
      long mx = 0;
      BigInt count = static_cast<unsigned long>(words_.size());
      for (const auto& w : words_) mx = std::max(mx, static_cast<long>(w.size()));
      for (const auto& p : pats_) {
        auto ks = p.k.elements_up_to(p.k.max().value_or(-1));
        count += static_cast<unsigned long>(ks.size());
        for (long k : ks) mx = std::max(mx, static_cast<long>(p.prefix.size() + k * p.repeat.size() + p.suffix.size()));
      }
      last_ = mx;
      tc_ = TailControl::finite(count);
    } else {
      if (!tc || tc->kind == TailControl::Kind::None)
        throw Error(ErrorCode::TailNotBoundable,
                    "infinite custom generating set without tail_control: the Vere-Jones parameter is not "
                    "computable from generator and language oracles alone, so a tail bound must be declared");
      if (tc->kind == TailControl::Kind::Finite) bad("tail_control 'finite' given for an infinite generating set");
      tc_ = *tc;
    }
  }
  std::string name() const override { return "custom"; }
  TailControl tail_control() const override { return tc_; }

 protected:
  long last_length() const override { return finite_ ? last_ : -1; }
  std::vector<Word> words_of_length(long L) override {
    std::vector<Word> out;
    for (const auto& w : words_)
      if (static_cast<long>(w.size()) == L) out.push_back(w);
    for (const auto& p : pats_) {
      long fixed = static_cast<long>(p.prefix.size() + p.suffix.size());
      long r = static_cast<long>(p.repeat.size());
      if (L < fixed) continue;
      if (r == 0) {
        if (L == fixed && p.k.next_at_least(0)) out.push_back(p.prefix + p.suffix);
        continue;
      }
      if ((L - fixed) % r != 0 || !p.k.contains((L - fixed) / r)) continue;
      Word w = p.prefix;
      for (long i = 0; i < (L - fixed) / r; ++i) w += p.repeat;
      out.push_back(w + p.suffix);
    }
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  std::vector<Word> words_;
  std::vector<Pattern> pats_;
  bool finite_ = true;
  long last_ = 0;
  TailControl tc_;
};

// Adds declared constants to a family system.
class DeclaredSystem : public GeneratorSystem {
 public:
  DeclaredSystem(std::shared_ptr<const GeneratorSystem> inner, DeclaredMap extra)
      : GeneratorSystem(inner->alphabet_size()), inner_(std::move(inner)), decl_(inner_->declared()) {
    for (auto& [k, v] : extra) decl_[k] = v;
  }
  std::string name() const override { return inner_->name(); }
  TailControl tail_control() const override { return inner_->tail_control(); }
  DeclaredMap declared() const override { return decl_; }
  std::vector<BigInt> counts_up_to(long K) const override { return inner_->counts_up_to(K); }
  std::optional<std::pair<Word, long>> direct_witness(const Word& w) const override {
    return inner_->direct_witness(w);
  }
  std::shared_ptr<const ExactSeries> exact_series(const Rat& x) const override { return inner_->exact_series(x); }

 protected:
  std::optional<Word> produce(std::size_t i) override { return inner_->try_generator(i); }
  std::optional<bool> decide_generator(const Word& w) const override { return inner_->is_generator(w); }

 private:
  std::shared_ptr<const GeneratorSystem> inner_;
  DeclaredMap decl_;
};

Word word_of(const json& j, int d) {
  Word w = word_from_text(j.get<std::string>());
  if (!word_over_alphabet(w, d)) bad("word '" + j.get<std::string>() + "' leaves the alphabet");
  return w;
}

LoadedSystem build(const json& doc) {
  if (!doc.is_object()) bad("system file must be a JSON object");
  LoadedSystem out;
  out.family = doc.at("family").get<std::string>();
  const std::string& f = out.family;
  std::shared_ptr<const GeneratorSystem> sys;
  if (f == "sgap") {
    SGapSpec s{doc.contains("S") ? intset_of(doc["S"]) : IntSet::naturals()};
    sys = sgap_system(s);
    out.language = sgap_language(s);
  } else if (f == "gengap") {
    GenGapSpec s;
    s.d = doc.at("d").get<int>();
    for (const auto& x : doc.at("S")) s.S.push_back(intset_of(x));
    for (const auto& p : doc.at("Pi")) s.Pi.push_back(ints_of(p));
    sys = gengap_system(s);
    out.language = gengap_language(s);
  } else if (f == "beta") {
    BetaSpec s;
    if (doc.contains("preperiod")) s.preperiod = ints_of(doc["preperiod"]);
    s.period = ints_of(doc.at("period"));
    sys = beta_system(s);
    out.language = beta_language(s);
  } else if (f == "dyck") {
    DyckSpec s;
    std::string v = doc.value("variant", std::string("open"));
    if (v == "open") s.variant = DyckVariant::OpenAugmented;
    else if (v == "close") s.variant = DyckVariant::CloseAugmented;
    else bad("dyck variant must be \"open\" or \"close\"");
    sys = dyck_system(s, doc.value("maxlen", 24L));
    out.language = dyck_language();
  } else if (f == "example51") {
    if (doc.contains("N0")) {
      long N0 = doc["N0"].get<long>();
      sys = example51_modified(N0, doc.value("cap", 48L));
      out.language = example51_language(N0);
    } else {
      sys = example51_system();
      out.language = example51_language();
    }
  } else if (f == "custom") {
    int d = doc.at("alphabet").get<int>();
    if (d < 1 || d > kMaxAlphabet) bad("alphabet size out of range");
    std::vector<Word> words;
    if (doc.contains("words"))
      for (const auto& w : doc["words"]) words.push_back(word_of(w, d));
    std::vector<Pattern> pats;
    if (doc.contains("patterns"))
      for (const auto& p : doc["patterns"])
        pats.push_back({p.contains("prefix") ? word_of(p["prefix"], d) : Word(),
                        p.contains("repeat") ? word_of(p["repeat"], d) : Word(),
                        p.contains("suffix") ? word_of(p["suffix"], d) : Word(), intset_of(p.at("k"))});
    if (words.empty() && pats.empty()) throw Error(ErrorCode::EmptyCode, "custom system without words");
    sys = std::make_shared<CustomSystem>(d, std::move(words), std::move(pats), tail_of(doc));
  } else {
    bad("unknown family '" + f + "'");
  }
  if (doc.contains("declared")) {
    DeclaredMap extra;
    for (auto it = doc["declared"].begin(); it != doc["declared"].end(); ++it) {
      const json& v = it.value();
      DeclaredConstant c;
      c.value = interval_of(v.is_object() ? v.at("value") : v);
      c.provenance = v.is_object() ? v.value("provenance", std::string("user")) : "user";
      if (c.provenance != "paper" && c.provenance != "user") bad("provenance must be \"paper\" or \"user\"");
      extra[it.key()] = c;
    }
    sys = std::make_shared<DeclaredSystem>(sys, std::move(extra));
  }
  if (doc.contains("weights")) {
    const json& w = doc["weights"];
    CustomWeights cw;
    for (const auto& x : w.at("p")) cw.p.push_back(rat_of(x));
    cw.tail = w.contains("tail") ? rat_of(w["tail"]) : Rat(0);
    cw.c = interval_of(w.at("c"));
    out.weights = std::move(cw);
  }
  out.system = std::move(sys);
  return out;
}

}  // namespace

LoadedSystem load_system_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    bad(std::string("invalid JSON: ") + e.what());
  }
  try {
    return build(doc);
  } catch (const json::exception& e) {
    bad(std::string("malformed system file: ") + e.what());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) bad("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

LoadedSystem load_system_file(const std::string& path) { return load_system_text(read_file(path)); }

Word parse_word(const LoadedSystem& s, const std::string& text) {
  if (text.empty()) throw Error(ErrorCode::ParseError, "empty word");
  if (s.family == "dyck" && text.find_first_not_of("()[]") == std::string::npos) return dyck::from_brackets(text);
  return word_from_text(text);
}

std::string show_word(const LoadedSystem& s, const Word& w) {
  if (s.family == "dyck") return dyck::to_brackets(w);
  return word_to_text(w);
}

}  // namespace codedshift::cli
