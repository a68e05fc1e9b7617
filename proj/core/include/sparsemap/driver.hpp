#pragma once

#include <vector>

#include "sparsemap/binder.hpp"
#include "sparsemap/io.hpp"

namespace sparsemap {

// Dense-bound speedup: the dense counterpart's resource lower bound divided
// by the realized interval.
Ratio compute_speedup(const SparseBlock& block, int final_ii, const CgraConfig& cfg);

struct RunOptions {
  CgraConfig cfg;
  SchedulerOptions sched;
  BinderOptions binder;
  int threads = 0;  // 0 = one per core
};

struct BlockOutcome {
  SparseBlock block;
  MapResult result;
  ResultRow row;
};

// Maps blocks concurrently; outcomes keep the input order so reports are
// stable under any worker count.
std::vector<BlockOutcome> map_blocks(const std::vector<SparseBlock>& blocks,
                                     const RunOptions& opts);

}  // namespace sparsemap
