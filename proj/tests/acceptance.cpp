// Acceptance run: one PASS/FAIL line per criterion.

#include <chrono>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "json.hpp"

#include "codedshift/errors.hpp"
#include "codedshift/families.hpp"
#include "codedshift/gmeasure.hpp"
#include "codedshift/spectral.hpp"
#include "codedshift/verejones.hpp"
#include "commands.hpp"
#include "gen.hpp"

using namespace codedshift;
using nlohmann::json;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string data(const std::string& f) { return std::string(CODEDSHIFT_DATA) + "/" + f; }

json run_cmd(const std::function<int(std::ostream&)>& cmd) {
  std::ostringstream out;
  int rc = cmd(out);
  if (rc != 0) throw std::runtime_error("command exited with " + std::to_string(rc));
  return json::parse(out.str());
}

Rat rat(const json& j) { return parse_rat(j.get<std::string>()); }
RatInterval iv(const json& j) { return RatInterval(rat(j["lo"]), rat(j["hi"])); }
bool meet(const RatInterval& a, const RatInterval& b) { return a.lo <= b.hi && b.lo <= a.hi; }
std::string show(const RatInterval& r) { return "[" + std::to_string(to_double(r.lo)) + ", " + std::to_string(to_double(r.hi)) + "]"; }

const cli::Output kJson{true, false};

Outcome criterion1() {
  json k = run_cmd([](std::ostream& o) { return cli::cmd_kappa(data("example51.json"), 20, kJson, o); });
  json e = run_cmd([](std::ostream& o) { return cli::cmd_entropy(data("example51.json"), 20, kJson, o); });
  RatInterval kappa = iv(k["kappa"]), h = iv(e["h"]);
  RatInterval l3 = log_bounds(Rat(3), 30);
  RatInterval half(l3.lo / 2, l3.hi / 2);
  bool ok = kappa.width() < pow2(-20) && kappa.contains(Rat(3)) && h.width() < pow2(-20) && meet(h, half);
  return {ok, "kappa " + show(kappa) + ", h " + show(h) + " vs ln(3)/2 " + show(half)};
}

Outcome criterion2() {
  auto t0 = std::chrono::steady_clock::now();
  json d = run_cmd([](std::ostream& o) { return cli::cmd_demo_noncomputable(10, std::nullopt, kJson, o); });
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  RatInterval gate = iv(d["gate"]);
  long N0 = d["N0"].get<long>();
  bool ok = gate.lo > Rat(7, 2) && rat(d["separation_lower"]) >= Rat(1, 2) && d["separated"] == true &&
            d["generators_agree"].get<long>() >= 1 && d["levels_agree"].get<long>() >= N0 && secs < 60;
  return {ok, "N0 = " + std::to_string(N0) + ", gate " + show(gate) + ", separation >= " +
                  std::to_string(to_double(rat(d["separation_lower"]))) + ", first " +
                  std::to_string(d["generators_agree"].get<long>()) + " generators and levels <= " +
                  std::to_string(d["levels_agree"].get<long>()) + " agree, " + std::to_string(secs) + " s"};
}

Outcome criterion3() {
  json k = run_cmd([](std::ostream& o) { return cli::cmd_kappa(data("dyck.json"), 12, kJson, o); });
  RatInterval kappa = iv(k["kappa"]);
  auto spec = mme_spec(dyck_system({}));
  const int n = 12;
  RatInterval total(Rat(0));
  for (int a = 0; a < 4; ++a) total = total + cylinder_measure(spec, Word(1, to_char(a)), n);
  bool norm = total.lo >= 1 - 4 * pow2(-n) && total.hi <= 1 + 4 * pow2(-n);
  long checks = 0, bad = 0;
  std::vector<Word> level{Word()};
  for (int len = 1; len <= 3; ++len) {
    std::vector<Word> next;
    for (const auto& w : level)
      for (int a = 0; a < 4; ++a) next.push_back(w + to_char(a));
    level = next;
    for (const auto& w : level) {
      RatInterval m = cylinder_measure(spec, w, n);
      RatInterval right(Rat(0)), left(Rat(0));
      for (int a = 0; a < 4; ++a) {
        right = right + cylinder_measure(spec, w + to_char(a), n);
        left = left + cylinder_measure(spec, Word(1, to_char(a)) + w, n);
      }
      checks += 2;
      bad += !meet(m, right);
      bad += !meet(m, left);
    }
  }
  bool ok = kappa.contains(Rat(2)) && kappa.width() < pow2(-12) && norm && bad == 0;
  return {ok, "kappa " + show(kappa) + ", sum of single brackets " + show(total) + ", " + std::to_string(checks) +
                  " consistency checks, " + std::to_string(bad) + " failed"};
}

Outcome criterion4() {
  auto spec = mme_spec(sgap_system({IntSet::naturals()}));
  long checks = 0, bad = 0;
  std::vector<Word> level{Word()};
  for (int len = 1; len <= 6; ++len) {
    std::vector<Word> next;
    for (const auto& w : level)
      for (int a = 0; a < 2; ++a) next.push_back(w + to_char(a));
    level = next;
    for (const auto& w : level) {
      RatInterval r = cylinder_measure(spec, w, 20);
      Rat target = pow2(-len);
      Rat err = std::max(abs(r.hi - target), abs(r.lo - target));
      ++checks;
      bad += !(err < pow2(-20));
    }
  }
  return {checks == 126 && bad == 0, std::to_string(checks) + " cylinders, " + std::to_string(bad) + " off"};
}

Outcome criterion5() {
  BetaSpec spec{{}, {1, 0}};
  auto sys = beta_system(spec);
  RatInterval h = h_from_lambda(solve_lambda(*sys, 24), 20);
  // phi bracketed through phi^2 = phi + 1
  Rat a = 1, b = 2;
  for (int i = 0; i < 80; ++i) {
    Rat m = (a + b) / 2;
    (m * m - m - 1 < 0 ? a : b) = m;
  }
  RatInterval lnphi(log_bounds(a, 40).lo, log_bounds(b, 40).hi);
  BetaRecovery rec = beta_recover(*sys, 12, 20);
  std::string digits;
  for (int d : rec.digits) digits += std::to_string(d);
  bool ok = h.width() < pow2(-20) && meet(h, lnphi) && digits == "101010101010" &&
            rec.beta.lo * rec.beta.lo - rec.beta.lo - 1 <= 0 && rec.beta.hi * rec.beta.hi - rec.beta.hi - 1 >= 0;
  return {ok, "h " + show(h) + " vs ln(phi) " + show(lnphi) + ", recovered " + digits};
}

Outcome criterion6() {
  struct Fam {
    std::string name;
    std::shared_ptr<GeneratorSystem> sys;
    std::shared_ptr<LanguageOracle> lang;
  };
  IntSet N1 = IntSet::arithmetic(1, 1);
  GenGapSpec gg{2, {N1, N1}, {{0, 1}, {1, 0}}};
  std::vector<Fam> fams{
      {"sgap", sgap_system({IntSet::naturals()}), sgap_language({IntSet::naturals()})},
      {"gengap", gengap_system(gg), gengap_language(gg)},
      {"beta", beta_system({{}, {1, 0}}), beta_language({{}, {1, 0}})},
      {"dyck", dyck_system({}), dyck_language()},
      {"example51", example51_system(), example51_language()},
  };
  long pairs = 0, bad = 0;
  std::string detail;
  for (const auto& f : fams) {
    auto spec = mme_spec(f.sys);
    std::vector<IdealMeasure> nu;
    for (int n = 2; n <= 6; ++n) nu.push_back(ideal_measure(spec, *f.lang, n));
    Rat worst = 0;
    for (int i = 0; i < 5; ++i)
      for (int j = i + 1; j < 5; ++j) {
        Rat w = w1_exact(nu[i], nu[j]);
        Rat bound = pow2(-(i + 2)) + pow2(-(j + 2));
        ++pairs;
        bad += !(w <= bound);
        Rat r = w / bound;
        if (r > worst) worst = r;
      }
    detail += f.name + " (" + std::to_string(nu.back().atoms.size()) + " atoms at n=6, max W1/bound " +
              std::to_string(to_double(worst)) + ") ";
  }
  return {bad == 0 && pairs == 50, std::to_string(pairs) + " pairs, " + std::to_string(bad) + " violations; " + detail};
}

Outcome criterion7() {
  testgen::Gen g(20260101);
  long agree = 0;
  for (int t = 0; t < 200; ++t) {
    auto code = g.code(2, 6, 5);
    SPResult sp = sardinas_patterson(code);
    // a shortest ambiguous word passes through distinct dangling suffixes, each a proper
    // suffix of a codeword, so its length is below (6*5 + 1) * 5
    auto bf = brute_force_double_parse(code, 160);
    agree += sp.uniquely_decodable == !bf.has_value();
  }
  SPResult ex = sardinas_patterson({word_from_digits("0"), word_from_digits("01"), word_from_digits("00")});
  bool ok = agree == 200 && !ex.uniquely_decodable && word_to_digits(ex.witness) == "00";
  return {ok, std::to_string(agree) + "/200 random codes agree; {0,01,00} witness \"" + word_to_digits(ex.witness) + "\""};
}

Outcome criterion8() {
  auto sys = example51_system();
  auto seq = h_upper_search(*sys, certified_kappa_oracle(*sys), 12);
  RatInterval h = h_from_lambda(solve_lambda(*sys, 30), 30);
  RatInterval l3 = log_bounds(Rat(3), 40);
  RatInterval half(l3.lo / 2, l3.hi / 2);
  bool mono = seq.size() == 12;
  for (std::size_t i = 1; mono && i < seq.size(); ++i) mono = seq[i] <= seq[i - 1];
  bool ok = mono && meet(h, half) && seq[11] > h.lo && seq[11] - h.lo < Rat(1, 10);
  return {ok, "h_12 = " + std::to_string(to_double(seq.back())) + ", h enclosure " + show(h) + ", gap " +
                  std::to_string(to_double(seq.back() - h.lo))};
}

}  // namespace

int main() {
  std::vector<std::function<Outcome()>> all{criterion1, criterion2, criterion3, criterion4,
                                            criterion5, criterion6, criterion7, criterion8};
  int failed = 0;
  for (std::size_t i = 0; i < all.size(); ++i) {
    Outcome o;
    auto t0 = std::chrono::steady_clock::now();
    try {
      o = all[i]();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    failed += !o.pass;
    std::cout << "criterion " << (i + 1) << ": " << (o.pass ? "PASS" : "FAIL") << " - " << o.detail << " ("
              << secs << " s)" << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
