#include <cstdio>

#include "sphqmc/checks.hpp"

int main() {
  int failed = 0;
  for (const auto& name : sphqmc::check_names()) {
    const auto r = sphqmc::run_check(name);
    std::printf("%s %-28s %7.2fs  %s\n", r.passed ? "PASS" : "FAIL", r.name.c_str(), r.seconds, r.detail.c_str());
    std::fflush(stdout);
    if (!r.passed) ++failed;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(sphqmc::check_names().size()) - failed,
              sphqmc::check_names().size());
  return failed == 0 ? 0 : 1;
}
