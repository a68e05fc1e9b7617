#pragma once

#include "sparsemap/block.hpp"
#include "sparsemap/cgra.hpp"
#include "sparsemap/schedule.hpp"
#include "sparsemap/sdfg.hpp"
#include "sparsemap/util.hpp"

namespace sparsemap {

struct SchedulerOptions {
  bool enable_aiba = true;   // association-guided reading selection
  bool enable_mulci = true;  // crossbar multicast for wide fan-out readings
  bool enable_ridat = true;  // per-kernel adder tree reconstruction
  bool baseline_mode = false;  // forces the three toggles off
  int max_ii = 32;
  int min_ii = 0;  // binder escalation restarts from here

  bool aiba() const { return enable_aiba && !baseline_mode; }
  bool mulci() const { return enable_mulci && !baseline_mode; }
  bool ridat() const { return enable_ridat && !baseline_mode; }
};

// Lower bound on II from PE, input-bus and output-bus pressure of the
// original graph (before any caching ops or clones).
int calculate_mii(const Sdfg& sdfg, const CgraConfig& cfg);

/**
 * Pick the next reading for the current time slot: the unscheduled reading
 * with maximal summed association against the readings already placed at t
 * (so correlated channels share bus cycles); on a fresh slot, the one with
 * maximal fan-out. Ties break by (fan-out desc, node id asc).
 */
NodeId aiba_select(const Sdfg& sdfg, const std::vector<NodeId>& unscheduled,
                   const std::vector<NodeId>& scheduled_at_t, const AssociationMatrix& assoc);

/**
 * Multicast a reading whose fan-out exceeds one bus: inserts ceil(f/N)-1
 * clone readings on further free buses at the same slot and splits the
 * fan-out into contiguous id-ordered groups of at most N muls, all co-timed
 * with the reading. Returns false (no mutation) without enough free buses.
 */
bool mul_ci(Sdfg& sdfg, Schedule& sched, const CgraConfig& cfg, NodeId reading, int t);

/**
 * Caching fallback: one Cop joins the reading's bus column and re-exposes the
 * datum next cycle, carrying the muls that did not fit at t; chains further
 * Cops while the remainder or PE pressure requires it (at most ii of them).
 * The Cop shares the bus fan-out with the co-timed muls, so at most N-1 muls
 * stay at t. Returns false (no mutation) if no chain within bounds fits.
 */
bool sched_with_caching(Sdfg& sdfg, Schedule& sched, const CgraConfig& cfg, NodeId reading,
                        int t);

// Safety net for muls a caching chain left unplaced: earliest slot at or
// after producer availability with a free PE.
bool sched_remain_mults(Sdfg& sdfg, Schedule& sched, const CgraConfig& cfg);

/**
 * Rebuild one kernel's accumulation tree around the realized mul times: while
 * more than one value is unaccumulated, combine the two earliest-scheduled
 * ones at t0+1 whenever two are ready and a PE is free, else advance t0.
 * Replaces the kernel's adds in place (ids reused, edges rewired).
 */
bool rid_at(Sdfg& sdfg, Schedule& sched, const CgraConfig& cfg, int kernel);

/**
 * Reconstruct every kernel under one shared clock. Layers are visited in
 * order; within a layer, kernels with more values left to fold claim the
 * remaining PEs first (ties prefer operands finished the cycle before, then
 * kernel order). Pairing inside a kernel follows rid_at exactly, so a lone
 * kernel degenerates to it.
 */
bool rid_at_all(Sdfg& sdfg, Schedule& sched, const CgraConfig& cfg);

// Keep the lowering-time balanced tree and schedule each add at the earliest
// free slot after its producers (used when reconstruction is off).
bool asap_fixed_tree(Sdfg& sdfg, Schedule& sched, const CgraConfig& cfg, int kernel);

// Schedule each kernel's output writing one cycle after its root; when that
// layer's output buses are full, bridge with a Cop retried at later slots.
bool sched_writings(Sdfg& sdfg, Schedule& sched, const CgraConfig& cfg);

struct ScheduleResult {
  Sdfg sdfg;  // with clones, caching ops and rebuilt trees
  Schedule schedule;
  int mii = 0;
};

/**
 * Full modulo scheduler. Starts at max(MII, min_ii); any placement dead end
 * discards every annotation and restarts one II higher, up to max_ii.
 */
Result<ScheduleResult> schedule_loop(const Sdfg& sdfg, const CgraConfig& cfg,
                                     const SchedulerOptions& opts);

// Association-blind, multicast-free list scheduler over the fixed balanced
// tree; readings in node-id order, caching as the only fallback.
Result<ScheduleResult> baseline_schedule(const Sdfg& sdfg, const CgraConfig& cfg,
                                         int max_ii = 32);

}  // namespace sparsemap
