#include "doctest.h"

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

#include "codedshift/rint.hpp"

using codedshift::Rat;
using nlohmann::json;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  std::string cmd = std::string(CODEDSHIFT_BIN) + " " + args + " 2>&1";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p);
  std::array<char, 4096> buf{};
  std::size_t k;
  while ((k = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), k);
  int st = pclose(p);
  r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string data(const std::string& f) { return std::string(CODEDSHIFT_DATA) + "/" + f; }

std::string tmp(const std::string& f) {
  std::filesystem::create_directories(CODEDSHIFT_TMP);
  return std::string(CODEDSHIFT_TMP) + "/" + f;
}

json run_json(const std::string& args) {
  Run r = run("--json " + args);
  INFO(r.out);
  REQUIRE(r.code == 0);
  return json::parse(r.out);
}

Rat rat(const json& j) { return codedshift::parse_rat(j.get<std::string>()); }
bool contains(const json& iv, const Rat& x) { return rat(iv["lo"]) <= x && x <= rat(iv["hi"]); }
Rat width(const json& iv) { return rat(iv["hi"]) - rat(iv["lo"]); }

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("entropy") {
  json j = run_json("entropy --system " + data("sgap_full.json") + " --precision 20");
  CHECK(contains(j["lambda"], Rat(2)));
  CHECK(width(j["h"]) < codedshift::pow2(-20));
  {
    auto ln2 = codedshift::log_bounds(Rat(2), 40);
    CHECK(rat(j["h"]["lo"]) <= ln2.hi);
    CHECK(ln2.lo <= rat(j["h"]["hi"]));
  }
  CHECK_FALSE(j.contains("wall_time_s"));
  Run text = run("entropy --system " + data("example51.json") + " --precision 20");
  CHECK(text.code == 0);
  CHECK(text.out.find("wall_time_s") != std::string::npos);
  Run bad = run("entropy --system " + data("custom_infinite_no_tail.json") + " --precision 10");
  CHECK(bad.code == 2);
  CHECK(bad.out.find("tail_control") != std::string::npos);
}

TEST_CASE("kappa") {
  json a = run_json("kappa --system " + data("example51.json") + " --precision 20");
  CHECK(contains(a["kappa"], Rat(3)));
  json b = run_json("kappa --system " + data("dyck.json") + " --precision 12");
  CHECK(contains(b["kappa"], Rat(2)));
  json c = run_json("kappa --system " + data("sgap_full.json") + " --precision 20");
  CHECK(contains(c["kappa"], Rat(2)));
  CHECK(c["certificate"].contains("tail_bound"));
  CHECK(c["certificate"].contains("lipschitz_bound"));
  Run m = run("kappa --system " + data("custom_wrong_kappa.json") + " --precision 10");
  CHECK(m.code == 1);
  CHECK(m.out.find("DeclaredConstantMismatch") != std::string::npos);
}

TEST_CASE("measure") {
  json a = run_json("measure --system " + data("sgap_full.json") + " --word 01 --precision 20");
  CHECK(contains(a["measure"], Rat(1, 4)));
  json b = run_json("measure --system " + data("sgap_full.json") + " --word 1 --precision 20 --terms");
  CHECK(contains(b["measure"], Rat(1, 2)));
  CHECK(b["terms"].size() > 0);
  CHECK(run("measure --system " + data("sgap_full.json") + " --word 012 --precision 20").code == 4);
  json d = run_json("measure --system " + data("dyck.json") + " --word '(' --precision 12");
  CHECK(contains(d["measure"], Rat(1, 3)));
  json f = run_json("--float measure --system " + data("sgap_full.json") + " --word 1 --precision 10");
  CHECK(f.contains("measure_float_noncertified"));
}

TEST_CASE("approx and w1") {
  std::string f3 = tmp("full3.json"), f4 = tmp("full4.json");
  json a = run_json("approx --system " + data("sgap_full.json") + " --precision 3 --out " + f3);
  CHECK(a["atoms"].get<long>() <= 128);
  CHECK(a["mass"] == "1");
  run_json("approx --system " + data("sgap_full.json") + " --precision 4 --out " + f4);
  json w = run_json("w1 --a " + f3 + " --b " + f4);
  CHECK(rat(w["w1"]) <= Rat(3, 16));
  CHECK(w["within_bound"] == true);
  json z = run_json("w1 --a " + f3 + " --b " + f3);
  CHECK(z["w1"] == "0");
  json s = run_json("w1 --a " + data("single_a.json") + " --b " + data("single_b.json"));
  CHECK(s["w1"] == "1/16");
  CHECK(run("w1 --a " + data("single_a.json") + " --b " + data("single_c.json")).code == 4);
  CHECK(run("w1 --a " + data("bad.json") + " --b " + data("single_a.json")).code == 3);
  std::string fd = tmp("dyck2.json");
  json d = run_json("approx --system " + data("dyck.json") + " --precision 2 --out " + fd);
  CHECK(d["mass"] == "1");
  CHECK(run("approx --system " + data("custom_infinite.json") + " --precision 2 --out " + tmp("x.json")).code == 5);
}

TEST_CASE("validate") {
  json a = run_json("validate --system " + data("sgap_full.json") + " --max-len 12");
  CHECK(a["verdict"] == "UniquelyDecodable");
  CHECK(a["oracle_prefix_ok"] == true);
  CHECK(a["evidence"].get<std::string>().find("finite-truncation") != std::string::npos);
  json b = run_json("validate --system " + data("custom_ambiguous.json") + " --max-len 4");
  CHECK(b["verdict"] == "Counterexample");
  CHECK(b["witness"] == "00");
  json c = run_json("validate --system " + data("dyck.json") + " --max-len 4");
  CHECK(c["verdict"] == "UniquelyDecodable");
}

TEST_CASE("demo") {
  json a = run_json("demo-noncomputable --precision 10");
  CHECK(a["verdict"] == "separated by >= 1/2");
  CHECK(contains(a["kappa"], Rat(3)));
  CHECK(rat(a["separation_lower"]) >= Rat(1, 2));
  Run g = run("demo-noncomputable --precision 10 --N0 3");
  CHECK(g.code == 2);
  CHECK(g.out.find("gate") != std::string::npos);
}

TEST_CASE("errors and determinism") {
  CHECK(run("entropy --system " + data("bad.json") + " --precision 10").code == 3);
  CHECK(run("entropy --system " + data("missing.json") + " --precision 10").code == 3);
  std::string args = "--json kappa --system " + data("example51.json") + " --precision 16";
  Run x = run(args), y = run(args);
  CHECK(x.code == 0);
  CHECK(x.out == y.out);
  std::string f1 = tmp("det1.json"), f2 = tmp("det2.json");
  run("approx --system " + data("beta_golden.json") + " --precision 3 --out " + f1);
  run("approx --system " + data("beta_golden.json") + " --precision 3 --out " + f2);
  CHECK(slurp(f1) == slurp(f2));
  Run c1 = run("w1 --a " + f1 + " --b " + f2);
  CHECK(c1.code == 0);
  CHECK(c1.out.find("w1: 0") != std::string::npos);
}

}  // TEST_SUITE
