#pragma once

#include <chrono>
#include <cstdint>

#include "sbs/model.hpp"

namespace sbs {

struct LocalSearchParams {
  std::chrono::milliseconds time_budget{30'000};
  std::uint64_t seed = 0;
  int tabu_tenure = 10;
  int max_no_improve = 50;
};

// Builds a feasible schedule: each family's jobs are split into runs with
// sizes inside [l_f, u_f] (release order within a family), runs are then
// appended to machines earliest-completion-first. The seed drives a small
// multi-start over run orders. Throws ConstructionFailed when no run
// partition exists (proven_infeasible) or no legal placement was found.
Schedule construct(const Instance& inst, std::uint64_t seed);

// Steepest-descent tabu search over feasibility-preserving moves: intra-block
// swaps, same-family job transfers, block relocation, block swaps, and block
// merges. Every accepted layout is retimed with earliest_timing. Returns the
// best schedule found; never worse than start.
Schedule improve(const Instance& inst, const Schedule& start,
                 const LocalSearchParams& params);

}  // namespace sbs
