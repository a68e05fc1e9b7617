#pragma once

#include <map>
#include <string>
#include <vector>

#include "sparsemap/binder.hpp"
#include "sparsemap/block.hpp"

namespace sparsemap {

struct Violation {
  std::string rule;  // short identifier, e.g. "edge-timing", "pe-exclusive"
  std::string detail;
};

/**
 * Re-derives mapping legality from the artifact alone: edge timing per
 * dependence kind, per-layer reading/writing/op capacity, PE and bus
 * exclusivity, physical consistency of every route, and register-file port
 * and slot pressure recomputed from the routed edges. Shares no logic with
 * the scheduler or binder.
 */
std::vector<Violation> validate_mapping(const Sdfg& sdfg, const CgraConfig& cfg,
                                        const Schedule& sched, const Mapping& mapping);

// Independent recount of reported quantities from the graph and schedule.
struct Recount {
  int cops = 0;
  int mcids = 0;
  int readings = 0;  // clones included
  int ops = 0;
  int writings = 0;
};
Recount recount_mapping(const Sdfg& sdfg, const Schedule& sched);

// Resource lower bound on the initiation interval, recomputed from scratch
// on the pre-scheduling graph.
int lower_bound_ii(const Sdfg& sdfg, const CgraConfig& cfg);

struct FunctionalReport {
  bool ok = false;
  std::vector<long long> expected;  // per kernel, from mask and weights
  std::vector<long long> actual;    // per kernel, simulated through the mapping
  std::string problem;
};

/**
 * Streams one iteration's channel values through the bound fabric: every
 * value moves only along its assigned route at the cycle the route permits,
 * multiplies against the local weight, and accumulates along the realized
 * tree. Weights are a channels x kernels row-major matrix; entries outside
 * the mask are ignored.
 */
FunctionalReport functional_check(const SparseBlock& block, const Sdfg& sdfg,
                                  const CgraConfig& cfg, const Schedule& sched,
                                  const Mapping& mapping, const std::vector<long long>& inputs,
                                  const std::vector<long long>& weights);

}  // namespace sparsemap
