#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

#include "blochfact/acceptance.hpp"

// Usage: acceptance_test [--seed N] [--json PATH]
int main(int argc, char** argv) {
  std::uint64_t seed = 20240611;
  std::string json_path;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--seed" && i + 1 < argc) seed = std::strtoull(argv[++i], nullptr, 10);
    else if (a == "--json" && i + 1 < argc) json_path = argv[++i];
    else {
      std::fprintf(stderr, "usage: %s [--seed N] [--json PATH]\n", argv[0]);
      return 1;
    }
  }
  using namespace blochfact::acceptance;
  const auto results = run_suite(seed, all_criteria(), [](const CriterionResult& r) {
    std::printf("%s\n", line(r).c_str());
    std::fflush(stdout);
  });
  int failed = 0;
  json report = json::array();
  for (const auto& r : results) {
    failed += !r.pass;
    report.push_back(to_json(r));
  }
  if (!json_path.empty()) std::ofstream(json_path) << report.dump(2) << "\n";
  std::printf("%d/%zu criteria passed\n", static_cast<int>(results.size()) - failed, results.size());
  return failed == 0 ? 0 : 1;
}
