#pragma once

#include <chrono>
#include <cstdint>

#include "sbs/model.hpp"

namespace sbs {

struct GenConfig {
  int n_jobs = 0;
  int n_families = 0;
  int n_machines = 0;
  int setup_scale = 20;  // S: raw setups drawn from [0,S]
  std::uint64_t seed = 0;
  int ptime_min = 1;
  int ptime_max = 20;
  int weight_min = 1;
  int weight_max = 10;
  double release_factor = 0.5;  // releases drawn from [0, floor(alpha * ceil(sum p / M))]
};

// Min-plus transitive closure over states {0, 1..F}: every entry becomes the
// cheapest setup path through intermediate families. Never increases an
// entry; idempotent; output satisfies both triangle properties.
SetupMatrix enforce_triangle(const SetupMatrix& raw);

// Deterministic in the seed. Families cover 1..F (one job dealt per family
// first), ptimes/weights/releases uniform over the configured ranges, setups
// uniform in [0,S] then triangle-closed. minSize is all ones; maxSize is each
// family's cardinality.
Instance generate_base(const GenConfig& cfg);

// The minimum batch sizes are derived from a feasible schedule of the core
// relaxation: for each family, take its smallest run length k_f and draw l_f
// uniformly from {min(k_f+1, |J_f|), ..., |J_f|}. Throws InfeasibleInputError
// when core_schedule is not feasible under all-ones minimum sizes.
std::vector<Time> derive_min_batch_sizes(const Instance& inst,
                                         const Schedule& core_schedule,
                                         std::uint64_t seed);

// Full pipeline: generate_base, solve the core relaxation under the given
// budget, then derive and install the minimum batch sizes.
Instance generate_instance(const GenConfig& cfg,
                           std::chrono::milliseconds core_budget = std::chrono::milliseconds(5000));

}  // namespace sbs
