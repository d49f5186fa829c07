#include <iostream>
#include <optional>

#include "CLI11.hpp"

#include "commands.hpp"

using namespace codedshift::cli;

int main(int argc, char** argv) {
  CLI::App app{"codedshift: certified computations for coded shifts"};
  app.require_subcommand(1);
  app.fallthrough();
  Output o;
  app.add_flag("--json", o.json, "emit JSON");
  app.add_flag("--float", o.decimals, "add decimal approximations (not certified)");

  std::string system, word, out_file, fa, fb;
  int n = 20;
  long max_len = 8, n0 = 0;
  bool terms = false;

  auto* entropy = app.add_subcommand("entropy", "enclose lambda* and h");
  entropy->add_option("--system", system, "system file")->required();
  entropy->add_option("--precision", n, "N, enclosures narrower than 2^-N")->required();

  auto* kappa = app.add_subcommand("kappa", "enclose the Vere-Jones parameter");
  kappa->add_option("--system", system, "system file")->required();
  kappa->add_option("--precision", n, "N")->required();

  auto* measure = app.add_subcommand("measure", "enclose the MME of a cylinder");
  measure->add_option("--system", system, "system file")->required();
  measure->add_option("--word", word, "central word")->required();
  measure->add_option("--precision", n, "N")->required();
  measure->add_flag("--terms", terms, "list the contributing generator placements");

  auto* approx = app.add_subcommand("approx", "write an ideal measure within 2^-N of the MME");
  approx->add_option("--system", system, "system file")->required();
  approx->add_option("--precision", n, "N")->required();
  approx->add_option("--out", out_file, "output JSON file")->required();

  auto* w1 = app.add_subcommand("w1", "exact Wasserstein distance of two ideal measures");
  w1->add_option("--a", fa, "first ideal measure")->required();
  w1->add_option("--b", fb, "second ideal measure")->required();

  auto* validate = app.add_subcommand("validate", "oracle checks and unique decodability of a truncation");
  validate->add_option("--system", system, "system file")->required();
  validate->add_option("--max-len", max_len, "K")->required();

  auto* demo = app.add_subcommand("demo-noncomputable", "kappa separation with agreeing oracles");
  demo->add_option("--precision", n, "N")->default_val(10);
  auto* n0opt = demo->add_option("--N0", n0, "odd N0 >= 3; searched when absent");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kFailure;
  }
  if (n < 0) {
    std::cerr << "error: --precision must be >= 0\n";
    return kFailure;
  }

  return guarded(
      [&]() -> int {
        if (*entropy) return cmd_entropy(system, n, o, std::cout);
        if (*kappa) return cmd_kappa(system, n, o, std::cout);
        if (*measure) return cmd_measure(system, word, n, terms, o, std::cout);
        if (*approx) return cmd_approx(system, n, out_file, o, std::cout);
        if (*w1) return cmd_w1(fa, fb, o, std::cout);
        if (*validate) return cmd_validate(system, max_len, o, std::cout);
        std::optional<long> N0;
        if (*n0opt) N0 = n0;
        return cmd_demo_noncomputable(n, N0, o, std::cout);
      },
      std::cerr);
}
