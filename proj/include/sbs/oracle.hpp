#pragma once

#include "sbs/solver.hpp"

namespace sbs {

struct OracleLimits {
  int max_jobs = 8;
  std::int64_t max_states = 10'000'000;
};

// Exhaustive ground truth: every machine assignment and every per-machine
// permutation. Keeps the minimum-TWCT schedule, breaking objective ties by
// the canonical key. Throws TooLargeError beyond the limits.
SolveReport brute_force(const Instance& inst, const OracleLimits& lim = {});

}  // namespace sbs
