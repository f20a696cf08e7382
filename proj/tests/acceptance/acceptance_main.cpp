#include <iostream>
#include <string>

#include "ampsim/acceptance.hpp"

// Usage: ampsim_acceptance [--corrupt-ming-block] [A1 A2 ...]
int main(int argc, char** argv) {
  ampsim::AcceptanceOptions options;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--corrupt-ming-block") {
      options.corrupt_ming_block = true;
    } else {
      options.only.push_back(arg);
    }
  }
  bool all = true;
  for (const auto& r : ampsim::run_acceptance(options)) {
    std::cout << ampsim::format_result(r) << std::endl;
    all = all && r.passed;
  }
  return all ? 0 : 1;
}
