#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "sbs/errors.hpp"

namespace sbs {

// All times live on an integer grid.
using Time = std::int64_t;
using JobId = int;
using FamilyId = int;    // 1-based
using MachineId = int;   // 1-based

struct Job {
  JobId id = 0;
  FamilyId family = 1;
  std::int64_t weight = 1;
  Time release = 0;
  Time ptime = 1;
};

// Family-to-family setup times with a virtual initial state in row 0.
// Rows are indexed 0..F (row 0 = machine before its first batch), columns 1..F.
class SetupMatrix {
 public:
  SetupMatrix() = default;
  SetupMatrix(int n_families, std::vector<std::vector<Time>> rows)
      : n_families_(n_families), rows_(std::move(rows)) {}

  int families() const { return n_families_; }

  // tau_{0g}: setup before the first batch on a machine.
  Time initial(FamilyId g) const { return rows_[0][static_cast<size_t>(g) - 1]; }

  // tau_{fg}: setup when family g directly follows family f. Zero within a family.
  Time between(FamilyId f, FamilyId g) const {
    return rows_[static_cast<size_t>(f)][static_cast<size_t>(g) - 1];
  }

  // state = 0 means "no batch processed yet", otherwise the previous family.
  Time from_state(int state, FamilyId g) const {
    return rows_[static_cast<size_t>(state)][static_cast<size_t>(g) - 1];
  }

  const std::vector<std::vector<Time>>& rows() const { return rows_; }

  bool well_shaped() const;

  // True when both triangle properties hold (families and initial row).
  bool is_metric() const;

 private:
  int n_families_ = 0;
  std::vector<std::vector<Time>> rows_;  // (F+1) x F
};

struct Instance {
  std::vector<Job> jobs;
  int n_families = 0;
  int n_machines = 0;
  SetupMatrix setups;
  std::vector<Time> min_size;  // l_f, index family-1
  std::vector<Time> max_size;  // u_f, index family-1

  Time min_size_of(FamilyId f) const { return min_size[static_cast<size_t>(f) - 1]; }
  Time max_size_of(FamilyId f) const { return max_size[static_cast<size_t>(f) - 1]; }

  // Number of jobs in family f.
  int family_count(FamilyId f) const;
};

// id -> index into inst.jobs. Throws NotPartitionError on duplicate ids.
std::unordered_map<JobId, int> make_job_index(const Instance& inst);

// Pure machine-to-jobs decision: sequences[m-1] is the processing order on machine m.
struct Assignment {
  std::vector<std::vector<JobId>> sequences;

  int n_machines() const { return static_cast<int>(sequences.size()); }
};

// Slot-major encoding of an assignment used for deterministic tie-breaking
// among equal-objective optima: machine 1's jobs, a separator, machine 2's
// jobs, ... The separator sorts after every job id, so packing low machines
// first yields the smaller key. Oracle and solver share this comparator.
std::vector<std::int64_t> canonical_key(const Assignment& asg);
bool canonical_less(const Assignment& a, const Assignment& b);

struct Schedule {
  Assignment assignment;
  std::map<JobId, Time> start;

  Time start_of(JobId id) const;
};

// Maximal run of consecutive same-family jobs on one machine.
// block_start/block_end are -1 when decoded from a bare Assignment.
struct FamilyBlock {
  MachineId machine = 0;
  FamilyId family = 0;
  std::vector<JobId> job_ids;
  Time block_start = -1;
  Time block_end = -1;

  int size() const { return static_cast<int>(job_ids.size()); }
};

enum class ViolationKind {
  Overlap,
  Release,
  Setup,
  InitialSetup,
  BlockTooSmall,
  BlockTooLarge,
  NotPartition,
};

const char* to_string(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  MachineId machine = 0;  // 0 = not machine-specific
  std::vector<JobId> job_ids;
  std::string detail;
};

struct FeasibilityReport {
  bool feasible = true;
  std::vector<Violation> violations;
};

enum class InstanceViolationKind {
  JobField,
  FamilyRef,
  DuplicateJobId,
  SetupShape,
  SetupDiagonal,
  SetupNegative,
  Triangle,
  InitialTriangle,  // warning: initial-state triangle, enforced by the generator
  SizeWindow,
  MinSizeCardinality,
  Dimensions,
};

struct InstanceViolation {
  InstanceViolationKind kind;
  bool warning = false;
  std::string detail;
};

// Structural validation. Empty result means well-formed; violations are data,
// not failures.
std::vector<InstanceViolation> validate_instance(const Instance& inst);

// Upper bound on every completion time: all jobs sequentially on one machine
// after the last release / initial setup, with at most F-1 family switches.
Time horizon(const Instance& inst);

// Partition each machine's sequence into maximal same-family runs.
std::vector<FamilyBlock> decode_blocks(const Instance& inst, const Assignment& asg);

// Same, with block_start/block_end filled in from the schedule's starts.
std::vector<FamilyBlock> decode_blocks(const Instance& inst, const Schedule& sched);

// Componentwise-minimal feasible starts for the given sequences: each job
// starts at max(release, predecessor completion + setup), first jobs at
// max(release, initial setup).
Schedule earliest_timing(const Instance& inst, const Assignment& asg);

// Total weighted completion time, sum of w_j * (start_j + p_j).
std::int64_t twct(const Instance& inst, const Schedule& sched);

// Full feasibility audit of a schedule: partition, releases, initial setups,
// overlaps/setup gaps, and block-size windows. Reports every violation.
FeasibilityReport check_feasible(const Instance& inst, const Schedule& sched);

}  // namespace sbs
