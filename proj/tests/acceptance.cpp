// Acceptance run: one pass/fail line per criterion, nonzero exit if any fails.
#include <cstdio>

#include "nlft/harness.hpp"

int main() {
  nlft::Harness h(nlft::HarnessConfig{});
  int failed = 0;
  for (const auto& id : nlft::Harness::claim_ids()) {
    const auto rec = h.run_claim(id);
    if (rec.failed()) ++failed;
    std::printf("%-4s %s  %-44s %s  [%.1fs]\n", rec.id.c_str(), rec.failed() ? "FAIL" : "PASS", rec.title.c_str(),
                rec.summary().c_str(), rec.seconds);
    for (const auto& c : rec.checks)
      if (!c.passed) std::printf("       failed check: %s = %.6g %s %.6g\n", c.name.c_str(), c.measured, c.relation.c_str(), c.bound);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failed, nlft::Harness::claim_ids().size());
  return failed == 0 ? 0 : 1;
}
