// Acceptance suite: one PASS/FAIL line per criterion. With no arguments all
// criteria run; otherwise only the listed ids.
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "spectra/acceptance.hpp"

int main(int argc, char** argv) {
  std::vector<int> ids;
  for (int i = 1; i < argc; ++i) ids.push_back(std::atoi(argv[i]));
  bool all = true;
  for (const auto& r : spectra::run_acceptance({}, ids)) {
    std::cout << spectra::format_result(r) << std::endl;
    all = all && r.passed;
  }
  return all ? 0 : 1;
}
