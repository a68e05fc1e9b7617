#pragma once

#include <map>
#include <utility>
#include <vector>

#include "sparsemap/cgra.hpp"
#include "sparsemap/schedule.hpp"
#include "sparsemap/sdfg.hpp"
#include "sparsemap/util.hpp"

namespace sparsemap {

// How an edge's datum physically travels. Input/output edges ride the I/O
// bus picked at binding; distance-1 internal edges resolve to the producer's
// local register (same PE), its row bus or its column bus; anything living
// longer than a cycle goes through the global register file.
enum class RouteClass { InputBus, OutputBus, Dist1, Grf };

struct GrfValue {
  NodeId producer = kNoNode;
  std::vector<NodeId> consumers;
  int write_cycle = 0;  // modulo cycle the value enters the GRF
  int start = 0;        // first absolute cycle it is live (producer t+1)
  int end = 0;          // last absolute cycle it is read
  int slot = -1;
};

struct RoutePlan {
  std::map<std::pair<NodeId, NodeId>, RouteClass> cls;
  std::vector<GrfValue> grf;

  RouteClass at(NodeId src, NodeId dst) const { return cls.at({src, dst}); }
  int grf_slot(NodeId producer) const;
};

/**
 * Assign a route class to every edge and plan the GRF: multi-cycle internal
 * dependencies are grouped by producer value, checked against the write/read
 * port budget per modulo cycle, and packed into register slots first-fit in
 * producer-time order. Local registers never carry them: a producer's output
 * register only survives one cycle before its next firing can clobber it,
 * and a same-modulo pair would need exactly that full wrap. Fails when ports
 * or capacity are oversubscribed, which sends the caller one II higher.
 */
Result<RoutePlan> preallocate_routes(const Sdfg& sdfg, const Schedule& sched,
                                     const CgraConfig& cfg);

}  // namespace sparsemap
