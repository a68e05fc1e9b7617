#pragma once

#include <cstdint>
#include <vector>

#include "sparsemap/cgra.hpp"
#include "sparsemap/sdfg.hpp"
#include "sparsemap/util.hpp"

namespace sparsemap {

/**
 * Modulo schedule over an s-DFG. Scheduling times are absolute; the modulo
 * layer of node v is time[v] % ii. The occupancy tables t_pe/t_in/t_out count
 * PE slots (Mul/Add/Cop), input-bus slots (readings incl. multicast clones)
 * and output-bus slots per layer and are kept consistent by the scheduler.
 */
struct Schedule {
  int ii = 1;
  std::vector<int> time;           // per node id, -1 = unscheduled
  std::vector<uint8_t> cached;     // c flag: reading backed by a caching op
  std::vector<uint8_t> multicast;  // mc flag: reading with crossbar clones
  std::vector<int> bus;            // provisional bus slot for readings/writings, -1 = none
  std::vector<int> t_pe, t_in, t_out;

  void resize(std::size_t n);
  bool scheduled(NodeId v) const { return v >= 0 && v < int(time.size()) && time[v] >= 0; }
  int modulo(NodeId v) const { return time[v] % ii; }
};

// The per-layer node sets the modulo constraints quantify over. A multicast
// original is listed under `multicast`, its clones under `reads`, so
// |reads| + |multicast| equals occupied input buses at that layer.
struct ModuloSets {
  std::vector<NodeId> reads;      // M_R
  std::vector<NodeId> writes;     // M_W
  std::vector<NodeId> ops;        // M_OP (Mul and Add only)
  std::vector<NodeId> cached;     // M_C
  std::vector<NodeId> multicast;  // M_MC
};

Result<ModuloSets> derive_modulo_sets(const Sdfg& sdfg, const Schedule& sched, int layer);

// Multi-cycle internal dependencies: internal edges whose consumer runs more
// than one cycle after the producer. These are the edges that need a global
// register, so the scheduler works to minimize them.
Result<std::vector<Edge>> mcid_set(const Sdfg& sdfg, const Schedule& sched);

// Re-derives the modulo constraints from scratch; empty vector = clean.
std::vector<std::string> check_schedule(const Sdfg& sdfg, const CgraConfig& cfg,
                                        const Schedule& sched);

struct Metrics {
  int mii = 0;
  int ii_first_attempt = 0;  // II of the first schedule that reached binding
  int cops = 0;              // caching ops in that schedule
  int mcids = 0;             // multi-cycle internal dependencies in it
  bool first_attempt_success = false;
  bool mapped = false;
  int final_ii = 0;  // meaningful when mapped
  Ratio speedup{0, 1};
};

}  // namespace sparsemap
