// Runs the acceptance criteria and prints one pass/fail line per criterion.
// With no arguments all eight run in order; a single numeric argument runs
// just that criterion (the per-criterion ctest entries use this).

#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "hamtri/acceptance.hpp"

int main(int argc, char** argv) {
  std::vector<int> which;
  if (argc > 2) {
    std::fprintf(stderr, "usage: %s [criterion 1..8]\n", argv[0]);
    return 2;
  }
  if (argc == 2) {
    char* end = nullptr;
    long n = std::strtol(argv[1], &end, 10);
    if (end == argv[1] || *end != '\0' || n < 1 || n > 8) {
      std::fprintf(stderr, "usage: %s [criterion 1..8]\n", argv[0]);
      return 2;
    }
    which.push_back(static_cast<int>(n));
  } else {
    for (int i = 1; i <= 8; ++i) which.push_back(i);
  }

  bool all = true;
  for (int i : which) {
    hamtri::acceptance::CriterionResult r = hamtri::acceptance::run_criterion(i);
    std::printf("criterion %d: %s (%s, %.1fs)\n", r.index, r.pass ? "PASS" : "FAIL",
                r.name.c_str(), r.seconds);
    for (const auto& d : r.details) std::printf("    %s\n", d.c_str());
    std::fflush(stdout);
    all = all && r.pass;
  }
  return all ? 0 : 1;
}
