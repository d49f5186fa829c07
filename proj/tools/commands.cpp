#include "commands.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>

#include "json.hpp"

#include "codedshift/errors.hpp"
#include "codedshift/families.hpp"
#include "codedshift/gmeasure.hpp"
#include "codedshift/spectral.hpp"
#include "codedshift/verejones.hpp"
#include "system_file.hpp"

namespace codedshift::cli {

using Json = nlohmann::ordered_json;

namespace {

std::string dec(const Rat& x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", to_double(x));
  return buf;
}

class Report {
 public:
  explicit Report(const Output& o) : o_(o) {}
  Json& root() { return j_; }

  void put_iv(Json& at, const std::string& key, const RatInterval& r) const {
    at[key] = Json{{"lo", to_string(r.lo)}, {"hi", to_string(r.hi)}};
    if (o_.decimals) at[key + "_float_noncertified"] = Json::array({dec(r.lo), dec(r.hi)});
  }
  void put_rat(Json& at, const std::string& key, const Rat& x) const {
    at[key] = to_string(x);
    if (o_.decimals) at[key + "_float_noncertified"] = dec(x);
  }

  void emit(std::ostream& out, std::optional<double> wall = std::nullopt) {
    if (o_.json) {
      out << j_.dump(2) << "\n";
      return;
    }
    text(j_, out, 0);
    if (wall) out << "wall_time_s: " << *wall << "\n";
  }

 private:
  static std::string scalar(const Json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); }
  static bool is_iv(const Json& v) { return v.is_object() && v.size() == 2 && v.contains("lo") && v.contains("hi"); }

  static void text(const Json& j, std::ostream& out, int ind) {
    std::string pad(ind, ' ');
    for (auto it = j.begin(); it != j.end(); ++it) {
      const Json& v = it.value();
      out << pad << it.key() << ":";
      if (is_iv(v)) {
        out << " [" << scalar(v["lo"]) << ", " << scalar(v["hi"]) << "]\n";
      } else if (v.is_object()) {
        out << "\n";
        text(v, out, ind + 2);
      } else if (v.is_array()) {
        bool flat = std::all_of(v.begin(), v.end(), [](const Json& x) { return !x.is_structured(); });
        if (flat) {
          out << " ";
          for (std::size_t i = 0; i < v.size(); ++i) out << (i ? ", " : "") << scalar(v[i]);
          out << "\n";
        } else {
          out << "\n";
          for (const auto& x : v) {
            out << pad << "  -\n";
            text(x, out, ind + 4);
          }
        }
      } else {
        out << " " << scalar(v) << "\n";
      }
    }
  }

  const Output& o_;
  Json j_ = Json::object();
};

// every printed enclosure is re-checked before emission
void audit(const RatInterval& r, int n, const std::string& what) {
  if (r.lo > r.hi || r.width() >= pow2(-n))
    throw Error(ErrorCode::PrecisionExhausted, "self-audit failed: " + what + " enclosure is not narrower than 2^-" +
                                                   std::to_string(n));
}

GBernoulliSpec spec_for(const LoadedSystem& s) {
  if (s.weights) return custom_spec(s.system, s.weights->p, s.weights->tail, s.weights->c);
  return mme_spec(s.system);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::InvalidArgument, "cannot write " + path);
  f << text;
  if (!f) throw Error(ErrorCode::InvalidArgument, "write failed for " + path);
}

}  // namespace

int exit_code_for_current_exception(std::ostream& err) {
  try {
    throw;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    switch (e.code()) {
      case ErrorCode::TailNotBoundable:
      case ErrorCode::RatioNotCertifiable:
      case ErrorCode::GateNotSatisfied: return kTailOrCertificate;
      case ErrorCode::ParseError: return kParse;
      case ErrorCode::AlphabetMismatch: return kAlphabet;
      case ErrorCode::NoLanguageOracle: return kNoLanguage;
      default: return kFailure;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  }
}

int cmd_entropy(const std::string& system, int n, const Output& o, std::ostream& out) {
  auto t0 = std::chrono::steady_clock::now();
  LoadedSystem s = load_system_file(system);
  LambdaSolution sol = solve_lambda_ex(*s.system, n);
  RatInterval h = h_from_lambda(sol.lambda, n);
  audit(sol.lambda, n, "lambda");
  audit(h, n, "h");
  Report r(o);
  Json& j = r.root();
  j["command"] = "entropy";
  j["system"] = s.system->name();
  j["precision"] = n;
  r.put_iv(j, "lambda", sol.lambda);
  r.put_iv(j, "h", h);
  j["lambda_exact"] = sol.exact;
  j["terms_used"] = sol.terms_used;
  j["tail_control"] = to_string(s.system->tail_control());
  r.emit(out, seconds_since(t0));
  return kOk;
}

int cmd_kappa(const std::string& system, int n, const Output& o, std::ostream& out) {
  LoadedSystem s = load_system_file(system);
  KappaCertificate c = kappa_certified(*s.system, n);
  audit(c.value, n, "kappa");
  Report r(o);
  Json& j = r.root();
  j["command"] = "kappa";
  j["system"] = s.system->name();
  j["precision"] = n;
  r.put_iv(j, "kappa", c.value);
  Json cert = Json::object();
  r.put_iv(cert, "lambda_used", c.lambda_used);
  cert["terms_used"] = c.terms_used;
  r.put_rat(cert, "tail_bound", c.tail_bound);
  r.put_rat(cert, "lipschitz_bound", c.lipschitz_bound);
  r.put_rat(cert, "ratio", c.ratio);
  cert["declared_checked"] = c.declared_checked;
  j["certificate"] = cert;
  r.emit(out);
  return kOk;
}

int cmd_measure(const std::string& system, const std::string& word, int n, bool terms, const Output& o,
                std::ostream& out) {
  LoadedSystem s = load_system_file(system);
  Word w = parse_word(s, word);
  if (!word_over_alphabet(w, s.system->alphabet_size()))
    throw Error(ErrorCode::AlphabetMismatch,
                "word '" + word + "' uses a symbol outside the alphabet of size " +
                    std::to_string(s.system->alphabet_size()));
  GBernoulliSpec spec = spec_for(s);
  RatInterval mu = cylinder_measure(spec, w, n);
  audit(mu, n, "measure");
  Report r(o);
  Json& j = r.root();
  j["command"] = "measure";
  j["system"] = s.system->name();
  j["word"] = show_word(s, w);
  j["precision"] = n;
  j["weights"] = spec.mode == WeightMode::Mme ? "mme" : "custom";
  r.put_iv(j, "measure", mu);
  if (terms) {
    constexpr std::size_t kShown = 200;
    long cutoff = cylinder_cutoff(spec, w, n);
    long N = std::max(cutoff, static_cast<long>(w.size()));
    auto all = enumerate_occurrences(w, *s.system, N);
    Json list = Json::array();
    std::size_t used = 0;
    for (const auto& t : all) {
      if (spec.mode == WeightMode::Custom &&
          std::any_of(t.tuple.begin(), t.tuple.end(), [&](std::size_t i) { return i > spec.custom_p.size(); }))
        continue;
      ++used;
      if (list.size() >= kShown) continue;
      Json e = Json::object();
      Json gens = Json::array();
      for (std::size_t i : t.tuple) gens.push_back(show_word(s, s.system->generator(i)));
      e["generators"] = gens;
      e["offset"] = t.offset;
      r.put_iv(e, "value", g_cylinder_measure(spec, t.tuple, n + 8));
      list.push_back(e);
    }
    j["terms_cutoff"] = N;
    j["terms_closed_form"] = cutoff == 0;
    j["terms_total"] = used;
    j["terms"] = list;
  }
  r.emit(out);
  return kOk;
}

int cmd_approx(const std::string& system, int n, const std::string& out_file, const Output& o, std::ostream& out) {
  LoadedSystem s = load_system_file(system);
  if (!s.language)
    throw Error(ErrorCode::NoLanguageOracle, "system '" + s.family + "' has no language oracle; approx needs one");
  GBernoulliSpec spec = spec_for(s);
  IdealMeasureStats st;
  IdealMeasure m = ideal_measure(spec, *s.language, n, &st);
  check_ideal_measure(m);
  std::string text = ideal_measure_to_json(m);
  write_file(out_file, text);
  IdealMeasure back = ideal_measure_from_json(read_file(out_file));  // round trip
  Rat mass = 0;
  for (const auto& a : back.atoms) mass += a.weight;
  Report r(o);
  Json& j = r.root();
  j["command"] = "approx";
  j["system"] = s.system->name();
  j["precision"] = n;
  j["out"] = out_file;
  j["atoms"] = back.atoms.size();
  j["level"] = 2 * st.N + 1;
  j["level_size"] = st.level_size;
  j["cylinder_precision_bits"] = st.precision_bits;
  r.put_rat(j, "leftover", st.leftover);
  j["mass"] = to_string(mass);
  j["mass_is_one"] = mass == 1;
  j["w1_bound"] = "2^-" + std::to_string(n);
  r.emit(out);
  return mass == 1 ? kOk : kFailure;
}

int cmd_w1(const std::string& a, const std::string& b, const Output& o, std::ostream& out) {
  IdealMeasure ma = ideal_measure_from_json(read_file(a));
  IdealMeasure mb = ideal_measure_from_json(read_file(b));
  Rat d = w1_exact(ma, mb);
  Report r(o);
  Json& j = r.root();
  j["command"] = "w1";
  j["atoms_a"] = ma.atoms.size();
  j["atoms_b"] = mb.atoms.size();
  r.put_rat(j, "w1", d);
  bool ok = true;
  if (ma.precision && mb.precision) {
    Rat bound = pow2(-*ma.precision) + pow2(-*mb.precision);
    ok = d <= bound;
    j["bound"] = "2^-" + std::to_string(*ma.precision) + " + 2^-" + std::to_string(*mb.precision);
    j["bound_value"] = to_string(bound);
    j["within_bound"] = ok;
  }
  r.emit(out);
  return ok ? kOk : kFailure;
}

int cmd_validate(const std::string& system, long max_len, const Output& o, std::ostream& out) {
  if (max_len < 1) throw Error(ErrorCode::InvalidArgument, "--max-len must be >= 1");
  LoadedSystem s = load_system_file(system);
  Report r(o);
  Json& j = r.root();
  j["command"] = "validate";
  j["system"] = s.system->name();
  j["max_len"] = max_len;
  j["evidence"] = "finite-truncation evidence: generators of length <= " + std::to_string(max_len);
  std::vector<Word> words;
  try {
    std::size_t count = s.system->count_up_to_length(max_len);
    ValidationReport v = validate_oracle_prefix(*s.system, count);
    j["oracle_prefix_ok"] = v.ok;
    if (v.violation) j["oracle_violation"] = "g_" + std::to_string(v.violation->index) + ": " + v.violation->reason;
    for (std::size_t i = 1; i <= count; ++i) words.push_back(s.system->generator(i));
  } catch (const Error& e) {
    if (e.code() != ErrorCode::BudgetExceeded && e.code() != ErrorCode::OracleViolation) throw;
    j["oracle_prefix_ok"] = e.code() != ErrorCode::OracleViolation;
    j["enumeration_stopped"] = e.what();
    words.clear();
    for (std::size_t i = 1;; ++i) {
      std::optional<Word> g;
      try {
        g = s.system->try_generator(i);
      } catch (const Error&) {
        break;
      }
      if (!g || static_cast<long>(g->size()) > max_len) break;
      words.push_back(*g);
    }
  }
  j["generators_checked"] = words.size();
  if (words.empty()) {
    j["verdict"] = "NoGenerators";
  } else {
    SPResult sp = sardinas_patterson(words);
    j["verdict"] = sp.uniquely_decodable ? "UniquelyDecodable" : "Counterexample";
    if (!sp.uniquely_decodable) {
      j["witness"] = show_word(s, sp.witness);
      Json pa = Json::array(), pb = Json::array();
      for (const auto& w : sp.parse_a) pa.push_back(show_word(s, w));
      for (const auto& w : sp.parse_b) pb.push_back(show_word(s, w));
      j["parse_a"] = pa;
      j["parse_b"] = pb;
    }
  }
  r.emit(out);
  return kOk;
}

int cmd_demo_noncomputable(int n, std::optional<long> N0, const Output& o, std::ostream& out) {
  DemoReport d = kappa_separation_demo(N0, n);
  Report r(o);
  Json& j = r.root();
  j["command"] = "demo-noncomputable";
  j["precision"] = n;
  j["N0"] = d.N0;
  Json att = Json::array();
  for (const auto& a : d.attempts) {
    Json e = Json::object();
    e["N0"] = a.N0;
    r.put_iv(e, "gate", a.gate);
    e["certified"] = a.certified;
    att.push_back(e);
  }
  j["gate_attempts"] = att;
  r.put_iv(j, "gate", d.gate);
  j["gate_threshold"] = "7/2";
  r.put_iv(j, "kappa", d.kappa_base.value);
  r.put_iv(j, "lambda", d.kappa_base.lambda_used);
  r.put_iv(j, "x_prime", d.x_prime);
  r.put_iv(j, "lambda_prime", d.lambda_prime);
  r.put_rat(j, "kappa_prime_lower", d.kappa_prime_lower);
  r.put_rat(j, "separation_lower", d.separation_lower);
  j["generators_agree"] = d.generators_agree;
  j["generators_compared"] = d.generators_compared;
  j["levels_agree"] = d.levels_agree;
  Json ls = Json::array();
  for (auto x : d.level_sizes) ls.push_back(x);
  j["level_sizes"] = ls;
  j["separated"] = d.separated;
  j["verdict"] = d.separated ? "separated by >= 1/2" : "not separated";
  r.emit(out);
  return d.separated ? kOk : kTailOrCertificate;
}

}  // namespace codedshift::cli
