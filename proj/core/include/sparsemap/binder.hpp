#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "sparsemap/conflict.hpp"
#include "sparsemap/mis.hpp"
#include "sparsemap/routes.hpp"
#include "sparsemap/scheduler.hpp"

namespace sparsemap {

struct Route {
  enum class Kind { SamePeLrf, RowBus, ColBus, InputBusDirect, OutputBusDirect, Grf };
  Kind kind = Kind::SamePeLrf;
  int index = -1;  // bus index or GRF slot
  bool operator==(const Route& o) const { return kind == o.kind && index == o.index; }
};

struct Mapping {
  int ii = 1;
  std::vector<Binding> bindings;  // one per s-DFG node, node id order
  std::map<std::pair<NodeId, NodeId>, Route> routes;
  bool complete = false;
};

struct ExtractOutcome {
  Mapping mapping;
  std::vector<NodeId> unbound;  // nodes the independent set failed to cover
};

// Turn an independent set into bindings and per-edge routes. Distance-1
// dependencies resolve to the cheapest realized adjacency (local register
// over row bus over column bus).
ExtractOutcome extract_mapping(const ConflictGraph& cg, const Sdfg& sdfg, const Schedule& sched,
                               const RoutePlan& plan, const std::vector<int>& mis,
                               const CgraConfig& cfg);

struct BinderOptions {
  int mis_seeds = 8;  // independent seeded searches per II before escalating
  MisOptions mis;
};

struct MapResult {
  bool success = false;
  Sdfg sdfg;
  Schedule schedule;
  RoutePlan plan;
  Mapping mapping;
  Metrics metrics;
  std::string failure;
};

/**
 * Schedule, preallocate, bind; on an infeasible route plan or an incomplete
 * independent set after all seeds, reschedule one II higher and try again up
 * to max_ii. Metrics keep the first attempted schedule's II, caching-op and
 * multi-cycle counts plus whether that first attempt already bound.
 */
MapResult map_with_retries(const Sdfg& sdfg, const CgraConfig& cfg, const SchedulerOptions& sopts,
                           const BinderOptions& bopts);

}  // namespace sparsemap
