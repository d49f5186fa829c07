#pragma once

#include <iosfwd>
#include <optional>
#include <string>

namespace codedshift::cli {

// Exit codes
constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kTailOrCertificate = 2;  // TailNotBoundable, RatioNotCertifiable, GateNotSatisfied
constexpr int kParse = 3;
constexpr int kAlphabet = 4;
constexpr int kNoLanguage = 5;

struct Output {
  bool json = false;
  bool decimals = false;  // --float
};

int cmd_entropy(const std::string& system, int n, const Output& o, std::ostream& out);
int cmd_kappa(const std::string& system, int n, const Output& o, std::ostream& out);
int cmd_measure(const std::string& system, const std::string& word, int n, bool terms, const Output& o,
                std::ostream& out);
int cmd_approx(const std::string& system, int n, const std::string& out_file, const Output& o, std::ostream& out);
int cmd_w1(const std::string& a, const std::string& b, const Output& o, std::ostream& out);
int cmd_validate(const std::string& system, long max_len, const Output& o, std::ostream& out);
int cmd_demo_noncomputable(int n, std::optional<long> N0, const Output& o, std::ostream& out);

// Runs fn, mapping library errors to exit codes and printing them to err.
template <class F>
int guarded(F&& fn, std::ostream& err);
int exit_code_for_current_exception(std::ostream& err);

template <class F>
int guarded(F&& fn, std::ostream& err) {
  try {
    return fn();
  } catch (...) {
    return exit_code_for_current_exception(err);
  }
}

}  // namespace codedshift::cli
