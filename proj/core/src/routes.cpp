#include "sparsemap/routes.hpp"

#include <algorithm>

namespace sparsemap {

int RoutePlan::grf_slot(NodeId producer) const {
  for (const GrfValue& v : grf)
    if (v.producer == producer) return v.slot;
  return -1;
}

Result<RoutePlan> preallocate_routes(const Sdfg& sdfg, const Schedule& sched,
                                     const CgraConfig& cfg) {
  RoutePlan plan;
  std::map<NodeId, GrfValue> values;

  for (const Edge& e : sdfg.edges) {
    if (!sched.scheduled(e.src) || !sched.scheduled(e.dst))
      return Result<RoutePlan>::fail("unscheduled edge endpoint");
    int dist = sched.time[e.dst] - sched.time[e.src];
    switch (e.kind) {
      case EdgeKind::Read:
        plan.cls[{e.src, e.dst}] = RouteClass::InputBus;
        break;
      case EdgeKind::Write:
        plan.cls[{e.src, e.dst}] = RouteClass::OutputBus;
        break;
      case EdgeKind::Internal:
        if (dist == 1) {
          plan.cls[{e.src, e.dst}] = RouteClass::Dist1;
        } else {
          plan.cls[{e.src, e.dst}] = RouteClass::Grf;
          GrfValue& v = values[e.src];  // one write covers all consumers
          if (v.producer == kNoNode) {
            v.producer = e.src;
            v.start = sched.time[e.src] + 1;
            v.end = v.start;
            v.write_cycle = v.start % sched.ii;
          }
          v.consumers.push_back(e.dst);
          v.end = std::max(v.end, sched.time[e.dst]);
        }
        break;
    }
  }

  // Port pressure per modulo cycle. The crossbar broadcasts one slot read to
  // every co-timed consumer, so reads count per value, not per edge.
  std::vector<int> writes(sched.ii, 0), reads(sched.ii, 0);
  for (auto& [p, v] : values) ++writes[v.write_cycle];
  for (auto& [p, v] : values) {
    std::vector<uint8_t> seen(sched.ii, 0);
    for (NodeId c : v.consumers) {
      int m = sched.modulo(c);
      if (!seen[m]) {
        seen[m] = 1;
        ++reads[m];
      }
    }
  }
  for (int m = 0; m < sched.ii; ++m) {
    if (writes[m] > cfg.grf_write_ports)
      return Result<RoutePlan>::fail("GRF write port oversubscribed at cycle " +
                                     std::to_string(m));
    if (reads[m] > cfg.grf_read_ports)
      return Result<RoutePlan>::fail("GRF read port oversubscribed at cycle " + std::to_string(m));
  }

  // First-fit slot packing over modulo-expanded live ranges.
  std::vector<GrfValue> ordered;
  for (auto& [p, v] : values) ordered.push_back(v);
  std::sort(ordered.begin(), ordered.end(), [](const GrfValue& a, const GrfValue& b) {
    return a.start != b.start ? a.start < b.start : a.producer < b.producer;
  });
  auto cycles_of = [&](const GrfValue& v) {
    std::vector<uint8_t> occ(sched.ii, 0);
    for (int t = v.start; t <= v.end && t - v.start < sched.ii; ++t) occ[t % sched.ii] = 1;
    if (v.end - v.start + 1 >= sched.ii) std::fill(occ.begin(), occ.end(), uint8_t(1));
    return occ;
  };
  std::vector<std::vector<uint8_t>> slot_occ;  // per slot, per modulo cycle
  for (GrfValue& v : ordered) {
    std::vector<uint8_t> need = cycles_of(v);
    int found = -1;
    for (int s = 0; s < int(slot_occ.size()); ++s) {
      bool clash = false;
      for (int m = 0; m < sched.ii && !clash; ++m) clash = need[m] && slot_occ[s][m];
      if (!clash) {
        found = s;
        break;
      }
    }
    if (found < 0) {
      if (int(slot_occ.size()) >= cfg.grf_capacity)
        return Result<RoutePlan>::fail("GRF capacity exceeded");
      slot_occ.emplace_back(sched.ii, 0);
      found = int(slot_occ.size()) - 1;
    }
    for (int m = 0; m < sched.ii; ++m)
      if (need[m]) slot_occ[found][m] = 1;
    v.slot = found;
    plan.grf.push_back(v);
  }
  return Result<RoutePlan>::ok(std::move(plan));
}

}  // namespace sparsemap
