#include "stabwc/acceptance.hpp"

#include <cstdio>
#include <iostream>

using namespace stabwc;

int main() {
  AcceptanceOptions o;
  o.progress = [](const std::string& s) { std::cerr << s << "\n"; };
  int failed = 0;
  for (const auto& r : run_acceptance(o)) {
    std::string status = r.status == "pass" ? "PASS" : r.status == "fail" ? "FAIL" : "ENV-LIMITED";
    std::printf("[%s] criterion %2d: %s (%.2f s)", status.c_str(), r.id, r.title.c_str(), r.seconds);
    if (!r.detail.empty()) std::printf(" -- %s", r.detail.c_str());
    std::printf("\n");
    if (!r.passed()) ++failed;
  }
  std::printf("%s\n", failed ? "acceptance: FAILED" : "acceptance: all criteria pass");
  return failed ? 1 : 0;
}
