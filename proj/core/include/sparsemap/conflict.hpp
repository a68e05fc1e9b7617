#pragma once

#include <utility>
#include <vector>

#include "sparsemap/bitmatrix.hpp"
#include "sparsemap/cgra.hpp"
#include "sparsemap/routes.hpp"
#include "sparsemap/schedule.hpp"
#include "sparsemap/sdfg.hpp"
#include "sparsemap/util.hpp"

namespace sparsemap {

/**
 * One placement option for one s-DFG node on the time-extended machine.
 * Readings sit on an input bus, writings on an output bus, PE-side nodes
 * (Mul/Add/Cop) on a PE with optional row/column bus drives for forwarding
 * their result to next-layer consumers.
 */
struct Binding {
  enum class Kind { Read, Write, Op };
  Kind kind = Kind::Op;
  NodeId node = kNoNode;
  int layer = 0;
  int bus = -1;  // Read: input bus (column index), Write: output bus (row index)
  int row = -1, col = -1;
  bool drive_row = false, drive_col = false;
};

/**
 * Conflict graph over candidate bindings. Edges join pairs that cannot
 * coexist; a maximum independent set covering every node is a legal binding.
 *
 * Rules:
 *  - one binding per node (intra-node clique)
 *  - one reading per (input bus, layer); one writing per (output bus, layer)
 *  - a reading's consumers sit in its bus column; a writing's producer in its
 *    bus row
 *  - a bus carrying I/O traffic at a layer takes no PE drive at that layer,
 *    and vice versa; at most one driver per physical bus per layer
 *  - one PE-side node per (PE, layer)
 *  - distance-1 internal edges need same-PE, row-bus or column-bus adjacency
 *    with the matching drive on the producer (GRF-routed edges are exempt:
 *    the crossbar reaches every PE)
 */
struct ConflictGraph {
  std::vector<Binding> verts;
  std::vector<std::pair<int, int>> range;  // per node id: [begin, end) into verts
  BitMatrix adj;
  std::size_t edge_count = 0;
  int dfg_nodes = 0;

  int candidate_count(NodeId v) const { return range[v].second - range[v].first; }
};

Result<ConflictGraph> build_conflict_graph(const Sdfg& sdfg, const Schedule& sched,
                                           const CgraConfig& cfg, const RoutePlan& plan);

}  // namespace sparsemap
