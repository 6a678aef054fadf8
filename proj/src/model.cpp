#include "sbs/model.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

namespace sbs {

namespace {

constexpr std::int64_t kKeySeparator = std::numeric_limits<std::int64_t>::max();

std::string join_ids(const std::vector<JobId>& ids) {
  std::ostringstream os;
  for (size_t i = 0; i < ids.size(); ++i) {
    if (i) os << ",";
    os << ids[i];
  }
  return os.str();
}

}  // namespace

bool SetupMatrix::well_shaped() const {
  if (static_cast<int>(rows_.size()) != n_families_ + 1) return false;
  for (const auto& row : rows_) {
    if (static_cast<int>(row.size()) != n_families_) return false;
  }
  return true;
}

bool SetupMatrix::is_metric() const {
  if (!well_shaped()) return false;
  const int F = n_families_;
  for (int f = 1; f <= F; ++f) {
    for (int g = 1; g <= F; ++g) {
      for (int h = 1; h <= F; ++h) {
        if (between(f, h) > between(f, g) + between(g, h)) return false;
      }
    }
  }
  for (int g = 1; g <= F; ++g) {
    for (int f = 1; f <= F; ++f) {
      if (initial(g) > initial(f) + between(f, g)) return false;
    }
  }
  return true;
}

int Instance::family_count(FamilyId f) const {
  int count = 0;
  for (const auto& job : jobs) {
    if (job.family == f) ++count;
  }
  return count;
}

std::unordered_map<JobId, int> make_job_index(const Instance& inst) {
  std::unordered_map<JobId, int> index;
  index.reserve(inst.jobs.size());
  for (size_t i = 0; i < inst.jobs.size(); ++i) {
    auto [it, inserted] = index.emplace(inst.jobs[i].id, static_cast<int>(i));
    if (!inserted) {
      throw NotPartitionError("duplicate job id " + std::to_string(inst.jobs[i].id));
    }
  }
  return index;
}

std::vector<std::int64_t> canonical_key(const Assignment& asg) {
  std::vector<std::int64_t> key;
  size_t total = asg.sequences.size();
  for (const auto& seq : asg.sequences) total += seq.size();
  key.reserve(total);
  for (const auto& seq : asg.sequences) {
    for (JobId id : seq) key.push_back(id);
    key.push_back(kKeySeparator);
  }
  return key;
}

bool canonical_less(const Assignment& a, const Assignment& b) {
  return canonical_key(a) < canonical_key(b);
}

Time Schedule::start_of(JobId id) const {
  auto it = start.find(id);
  if (it == start.end()) {
    throw DomainError("no start time for job " + std::to_string(id));
  }
  return it->second;
}

const char* to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::Overlap: return "Overlap";
    case ViolationKind::Release: return "Release";
    case ViolationKind::Setup: return "Setup";
    case ViolationKind::InitialSetup: return "InitialSetup";
    case ViolationKind::BlockTooSmall: return "BlockTooSmall";
    case ViolationKind::BlockTooLarge: return "BlockTooLarge";
    case ViolationKind::NotPartition: return "NotPartition";
  }
  return "?";
}

std::vector<InstanceViolation> validate_instance(const Instance& inst) {
  std::vector<InstanceViolation> out;
  const int F = inst.n_families;

  if (F < 1) {
    out.push_back({InstanceViolationKind::Dimensions, false, "nFamilies must be >= 1"});
  }
  if (inst.n_machines < 1) {
    out.push_back({InstanceViolationKind::Dimensions, false, "nMachines must be >= 1"});
  }

  std::unordered_map<JobId, int> seen;
  for (const auto& job : inst.jobs) {
    if (job.id < 0) {
      out.push_back({InstanceViolationKind::JobField, false,
                     "job id " + std::to_string(job.id) + " is negative"});
    }
    if (++seen[job.id] == 2) {
      out.push_back({InstanceViolationKind::DuplicateJobId, false,
                     "job id " + std::to_string(job.id) + " appears more than once"});
    }
    if (job.ptime < 1) {
      out.push_back({InstanceViolationKind::JobField, false,
                     "job " + std::to_string(job.id) + ": ptime must be >= 1"});
    }
    if (job.weight < 1) {
      out.push_back({InstanceViolationKind::JobField, false,
                     "job " + std::to_string(job.id) + ": weight must be >= 1"});
    }
    if (job.release < 0) {
      out.push_back({InstanceViolationKind::JobField, false,
                     "job " + std::to_string(job.id) + ": release must be >= 0"});
    }
    if (job.family < 1 || job.family > F) {
      out.push_back({InstanceViolationKind::FamilyRef, false,
                     "job " + std::to_string(job.id) + ": family " +
                         std::to_string(job.family) + " outside 1.." + std::to_string(F)});
    }
  }

  if (static_cast<int>(inst.min_size.size()) != F ||
      static_cast<int>(inst.max_size.size()) != F) {
    out.push_back({InstanceViolationKind::Dimensions, false,
                   "minSize/maxSize must have one entry per family"});
    return out;
  }
  for (int f = 1; f <= F; ++f) {
    const Time l = inst.min_size_of(f);
    const Time u = inst.max_size_of(f);
    if (l < 1 || l > u) {
      out.push_back({InstanceViolationKind::SizeWindow, false,
                     "family " + std::to_string(f) + ": window [" + std::to_string(l) +
                         "," + std::to_string(u) + "] violates 1 <= l <= u"});
    }
    const int nf = inst.family_count(f);
    if (nf > 0 && l > nf) {
      out.push_back({InstanceViolationKind::MinSizeCardinality, false,
                     "family " + std::to_string(f) + ": l=" + std::to_string(l) +
                         " exceeds family size " + std::to_string(nf)});
    }
  }

  if (!inst.setups.well_shaped()) {
    out.push_back({InstanceViolationKind::SetupShape, false,
                   "setup matrix must be (F+1) x F"});
    return out;
  }
  for (int f = 0; f <= F; ++f) {
    for (int g = 1; g <= F; ++g) {
      if (inst.setups.from_state(f, g) < 0) {
        out.push_back({InstanceViolationKind::SetupNegative, false,
                       "setup[" + std::to_string(f) + "][" + std::to_string(g) +
                           "] is negative"});
      }
    }
  }
  for (int f = 1; f <= F; ++f) {
    if (inst.setups.between(f, f) != 0) {
      out.push_back({InstanceViolationKind::SetupDiagonal, false,
                     "setup[" + std::to_string(f) + "][" + std::to_string(f) +
                         "] must be 0"});
    }
  }
  for (int f = 1; f <= F; ++f) {
    for (int g = 1; g <= F; ++g) {
      for (int h = 1; h <= F; ++h) {
        if (inst.setups.between(f, h) >
            inst.setups.between(f, g) + inst.setups.between(g, h)) {
          out.push_back({InstanceViolationKind::Triangle, false,
                         "triangle violated: setup[" + std::to_string(f) + "][" +
                             std::to_string(h) + "] > setup[" + std::to_string(f) +
                             "][" + std::to_string(g) + "] + setup[" +
                             std::to_string(g) + "][" + std::to_string(h) + "]"});
        }
      }
    }
  }
  for (int g = 1; g <= F; ++g) {
    for (int f = 1; f <= F; ++f) {
      if (inst.setups.initial(g) > inst.setups.initial(f) + inst.setups.between(f, g)) {
        out.push_back({InstanceViolationKind::InitialTriangle, true,
                       "initial-state triangle violated: setup[0][" + std::to_string(g) +
                           "] > setup[0][" + std::to_string(f) + "] + setup[" +
                           std::to_string(f) + "][" + std::to_string(g) + "]"});
      }
    }
  }

  return out;
}

Time horizon(const Instance& inst) {
  Time max_release = 0;
  Time sum_ptime = 0;
  for (const auto& job : inst.jobs) {
    max_release = std::max(max_release, job.release);
    sum_ptime += job.ptime;
  }
  Time max_initial = 0;
  Time max_between = 0;
  for (int f = 1; f <= inst.n_families; ++f) {
    max_initial = std::max(max_initial, inst.setups.initial(f));
    for (int g = 1; g <= inst.n_families; ++g) {
      max_between = std::max(max_between, inst.setups.between(f, g));
    }
  }
  return std::max(max_release, max_initial) + sum_ptime +
         static_cast<Time>(inst.n_families - 1) * max_between;
}

namespace {

// Walks the sequences, checks the partition property, and hands each
// (machine, run of same-family jobs) to the caller.
void check_partition(const Instance& inst, const Assignment& asg,
                     const std::unordered_map<JobId, int>& index) {
  if (asg.n_machines() != inst.n_machines) {
    throw NotPartitionError("assignment has " + std::to_string(asg.n_machines()) +
                            " machines, instance has " +
                            std::to_string(inst.n_machines));
  }
  std::vector<char> used(inst.jobs.size(), 0);
  for (const auto& seq : asg.sequences) {
    for (JobId id : seq) {
      auto it = index.find(id);
      if (it == index.end()) {
        throw NotPartitionError("unknown job id " + std::to_string(id));
      }
      if (used[static_cast<size_t>(it->second)]++) {
        throw NotPartitionError("job id " + std::to_string(id) +
                                " scheduled more than once");
      }
    }
  }
  for (size_t i = 0; i < used.size(); ++i) {
    if (!used[i]) {
      throw NotPartitionError("job id " + std::to_string(inst.jobs[i].id) +
                              " is not scheduled");
    }
  }
}

std::vector<FamilyBlock> blocks_of(const Instance& inst, const Assignment& asg,
                                   const std::unordered_map<JobId, int>& index) {
  std::vector<FamilyBlock> blocks;
  for (int m = 1; m <= asg.n_machines(); ++m) {
    const auto& seq = asg.sequences[static_cast<size_t>(m) - 1];
    FamilyBlock current;
    for (JobId id : seq) {
      const Job& job = inst.jobs[static_cast<size_t>(index.at(id))];
      if (current.job_ids.empty() || current.family != job.family) {
        if (!current.job_ids.empty()) blocks.push_back(std::move(current));
        current = FamilyBlock{};
        current.machine = m;
        current.family = job.family;
      }
      current.job_ids.push_back(id);
    }
    if (!current.job_ids.empty()) blocks.push_back(std::move(current));
  }
  return blocks;
}

}  // namespace

std::vector<FamilyBlock> decode_blocks(const Instance& inst, const Assignment& asg) {
  auto index = make_job_index(inst);
  check_partition(inst, asg, index);
  return blocks_of(inst, asg, index);
}

std::vector<FamilyBlock> decode_blocks(const Instance& inst, const Schedule& sched) {
  auto index = make_job_index(inst);
  check_partition(inst, sched.assignment, index);
  auto blocks = blocks_of(inst, sched.assignment, index);
  for (auto& block : blocks) {
    const Job& first = inst.jobs[static_cast<size_t>(index.at(block.job_ids.front()))];
    const Job& last = inst.jobs[static_cast<size_t>(index.at(block.job_ids.back()))];
    block.block_start = sched.start_of(first.id);
    block.block_end = sched.start_of(last.id) + last.ptime;
  }
  return blocks;
}

Schedule earliest_timing(const Instance& inst, const Assignment& asg) {
  auto index = make_job_index(inst);
  check_partition(inst, asg, index);

  Schedule sched;
  sched.assignment = asg;
  for (const auto& seq : asg.sequences) {
    Time completion = 0;
    FamilyId prev_family = 0;  // 0 = initial state
    for (JobId id : seq) {
      const Job& job = inst.jobs[static_cast<size_t>(index.at(id))];
      const Time setup = inst.setups.from_state(prev_family, job.family);
      const Time start = std::max(job.release, completion + setup);
      sched.start[id] = start;
      completion = start + job.ptime;
      prev_family = job.family;
    }
  }
  return sched;
}

std::int64_t twct(const Instance& inst, const Schedule& sched) {
  std::int64_t total = 0;
  for (const auto& job : inst.jobs) {
    total += job.weight * (sched.start_of(job.id) + job.ptime);
  }
  return total;
}

FeasibilityReport check_feasible(const Instance& inst, const Schedule& sched) {
  FeasibilityReport report;
  auto add = [&report](ViolationKind kind, MachineId machine, std::vector<JobId> ids,
                       std::string detail) {
    report.violations.push_back({kind, machine, std::move(ids), std::move(detail)});
  };

  auto index = make_job_index(inst);
  const Assignment& asg = sched.assignment;

  // (a) partition
  std::vector<int> times_scheduled(inst.jobs.size(), 0);
  for (const auto& seq : asg.sequences) {
    for (JobId id : seq) {
      auto it = index.find(id);
      if (it == index.end()) {
        add(ViolationKind::NotPartition, 0, {id},
            "job " + std::to_string(id) + " not in instance");
        continue;
      }
      ++times_scheduled[static_cast<size_t>(it->second)];
    }
  }
  for (size_t i = 0; i < times_scheduled.size(); ++i) {
    if (times_scheduled[i] == 0) {
      add(ViolationKind::NotPartition, 0, {inst.jobs[i].id},
          "job " + std::to_string(inst.jobs[i].id) + " missing from assignment");
    } else if (times_scheduled[i] > 1) {
      add(ViolationKind::NotPartition, 0, {inst.jobs[i].id},
          "job " + std::to_string(inst.jobs[i].id) + " scheduled " +
              std::to_string(times_scheduled[i]) + " times");
    }
  }

  for (int m = 1; m <= asg.n_machines(); ++m) {
    const auto& seq = asg.sequences[static_cast<size_t>(m) - 1];
    const Job* prev = nullptr;
    Time prev_end = 0;

    FamilyId run_family = 0;
    int run_len = 0;
    std::vector<JobId> run_ids;

    auto close_run = [&]() {
      if (run_len == 0) return;
      const Time l = inst.min_size_of(run_family);
      const Time u = inst.max_size_of(run_family);
      if (run_len < l) {
        add(ViolationKind::BlockTooSmall, m, run_ids,
            "family " + std::to_string(run_family) + " block [" + join_ids(run_ids) +
                "] has size " + std::to_string(run_len) + " < l=" + std::to_string(l));
      } else if (run_len > u) {
        add(ViolationKind::BlockTooLarge, m, run_ids,
            "family " + std::to_string(run_family) + " block [" + join_ids(run_ids) +
                "] has size " + std::to_string(run_len) + " > u=" + std::to_string(u));
      }
    };

    for (JobId id : seq) {
      auto idx_it = index.find(id);
      if (idx_it == index.end()) continue;  // already reported above
      const Job& job = inst.jobs[static_cast<size_t>(idx_it->second)];

      Time start;
      try {
        start = sched.start_of(id);
      } catch (const DomainError&) {
        add(ViolationKind::NotPartition, m, {id},
            "job " + std::to_string(id) + " has no start time");
        continue;
      }

      // (b) release
      if (start < job.release) {
        add(ViolationKind::Release, m, {id},
            "job " + std::to_string(id) + " starts at " + std::to_string(start) +
                " before release " + std::to_string(job.release));
      }

      if (prev == nullptr) {
        // (c) initial setup
        const Time tau0 = inst.setups.initial(job.family);
        if (start < tau0) {
          add(ViolationKind::InitialSetup, m, {id},
              "job " + std::to_string(id) + " starts at " + std::to_string(start) +
                  " before initial setup " + std::to_string(tau0));
        }
      } else {
        // (d) overlap / setup gap
        const Time gap = start - prev_end;
        if (gap < 0) {
          add(ViolationKind::Overlap, m, {prev->id, id},
              "jobs " + std::to_string(prev->id) + " and " + std::to_string(id) +
                  " overlap by " + std::to_string(-gap));
        }
        if (prev->family != job.family) {
          const Time tau = inst.setups.between(prev->family, job.family);
          if (gap < tau) {
            add(ViolationKind::Setup, m, {prev->id, id},
                "gap " + std::to_string(gap) + " between jobs " +
                    std::to_string(prev->id) + " and " + std::to_string(id) +
                    " is below setup " + std::to_string(tau));
          }
        }
      }

      // (e) block windows, tracked as maximal runs
      if (run_len > 0 && job.family == run_family) {
        ++run_len;
        run_ids.push_back(id);
      } else {
        close_run();
        run_family = job.family;
        run_len = 1;
        run_ids = {id};
      }

      prev = &job;
      prev_end = start + job.ptime;
    }
    close_run();
  }

  report.feasible = report.violations.empty();
  return report;
}

}  // namespace sbs
