#pragma once

#include <cstdint>
#include <ostream>
#include <vector>

namespace pilotwave {

struct AcceptanceOptions {
  int threads = 1;
  std::vector<int> only;  // empty: run all criteria (1..13)
};

// Runs the acceptance criteria, printing one PASS/FAIL line per criterion.
// Returns the number of failed criteria.
int run_acceptance(std::ostream& os, const AcceptanceOptions& opts = {});

}  // namespace pilotwave
