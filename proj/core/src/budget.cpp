#include "codedshift/budget.hpp"

#include <cstdlib>
#include <string>

namespace codedshift {

int retry_budget() {
  const char* env = std::getenv("CODEDSHIFT_BUDGET");
  if (!env || !*env) return 24;
  try {
    int v = std::stoi(env);
    return v < 1 ? 1 : v;
  } catch (...) {
    return 24;
  }
}

}  // namespace codedshift
