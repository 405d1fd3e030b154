// Acceptance gate: runs every criterion and prints one line per criterion.
//
//   test_acceptance [--workers N] [--scratch DIR] [id ...]

#include "sgb/acceptance.hpp"

#include <cstdlib>
#include <iostream>
#include <string>

int main(int argc, char** argv) {
  sgb::AcceptanceOptions opt;
  opt.scratch_dir = "acceptance_scratch";
  std::vector<int> ids;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--workers" && i + 1 < argc) {
      opt.workers = static_cast<unsigned>(std::stoul(argv[++i]));
    } else if (a == "--scratch" && i + 1 < argc) {
      opt.scratch_dir = argv[++i];
    } else {
      ids.push_back(std::stoi(a));
    }
  }
  if (ids.empty()) {
    for (int id = 1; id <= sgb::kCriterionCount; ++id) ids.push_back(id);
  }
  int failed = 0;
  for (int id : ids) {
    sgb::CriterionResult r;
    try {
      r = sgb::run_criterion(id, opt);
    } catch (const std::exception& e) {
      r.id = id;
      r.name = "error";
      r.summary = e.what();
    }
    std::cout << sgb::format_result_line(r, true) << std::endl;
    failed += r.pass ? 0 : 1;
  }
  std::cout << (failed == 0 ? "all criteria pass" : std::to_string(failed) + " criteria failed") << std::endl;
  return failed == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
