#include "sparsemap/schedule.hpp"

#include <algorithm>

namespace sparsemap {

void Schedule::resize(std::size_t n) {
  time.resize(n, -1);
  cached.resize(n, 0);
  multicast.resize(n, 0);
  bus.resize(n, -1);
}

Result<ModuloSets> derive_modulo_sets(const Sdfg& sdfg, const Schedule& sched, int layer) {
  if (layer < 0 || layer >= sched.ii)
    return Result<ModuloSets>::fail("layer outside [0, ii)");
  ModuloSets ms;
  for (const Node& n : sdfg.nodes) {
    if (!sched.scheduled(n.id))
      return Result<ModuloSets>::fail("node " + std::to_string(n.id) + " unscheduled");
    if (sched.modulo(n.id) != layer) continue;
    switch (n.kind) {
      case NodeKind::InputRead:
        if (sched.multicast[n.id])
          ms.multicast.push_back(n.id);
        else
          ms.reads.push_back(n.id);
        if (sched.cached[n.id]) ms.cached.push_back(n.id);
        break;
      case NodeKind::OutputWrite:
        ms.writes.push_back(n.id);
        break;
      case NodeKind::Mul:
      case NodeKind::Add:
        ms.ops.push_back(n.id);
        break;
      case NodeKind::Cop:
        break;  // counted through t_pe, not part of M_OP
    }
  }
  return Result<ModuloSets>::ok(std::move(ms));
}

Result<std::vector<Edge>> mcid_set(const Sdfg& sdfg, const Schedule& sched) {
  std::vector<Edge> out;
  for (const Edge& e : sdfg.edges) {
    if (e.kind != EdgeKind::Internal) continue;
    if (!sched.scheduled(e.src) || !sched.scheduled(e.dst))
      return Result<std::vector<Edge>>::fail("edge endpoint unscheduled");
    if (sched.time[e.dst] - sched.time[e.src] > 1) out.push_back(e);
  }
  return Result<std::vector<Edge>>::ok(std::move(out));
}

std::vector<std::string> check_schedule(const Sdfg& sdfg, const CgraConfig& cfg,
                                        const Schedule& sched) {
  std::vector<std::string> problems;
  auto complain = [&](std::string s) { problems.push_back(std::move(s)); };

  if (sched.ii < 1) complain("ii must be positive");
  for (const Node& n : sdfg.nodes)
    if (!sched.scheduled(n.id)) complain("node " + std::to_string(n.id) + " unscheduled");
  if (!problems.empty()) return problems;

  for (const Edge& e : sdfg.edges) {
    int d = sched.time[e.dst] - sched.time[e.src];
    switch (e.kind) {
      case EdgeKind::Read:
        if (d != 0)
          complain("read edge " + std::to_string(e.src) + "->" + std::to_string(e.dst) +
                   " not same-cycle");
        break;
      case EdgeKind::Write:
        if (d != 1)
          complain("write edge " + std::to_string(e.src) + "->" + std::to_string(e.dst) +
                   " distance " + std::to_string(d));
        break;
      case EdgeKind::Internal:
        if (d < 1)
          complain("internal edge " + std::to_string(e.src) + "->" + std::to_string(e.dst) +
                   " distance " + std::to_string(d));
        break;
    }
  }

  std::vector<int> pe(sched.ii, 0), in(sched.ii, 0), out(sched.ii, 0);
  for (const Node& n : sdfg.nodes) {
    int m = sched.modulo(n.id);
    switch (n.kind) {
      case NodeKind::InputRead: ++in[m]; break;
      case NodeKind::OutputWrite: ++out[m]; break;
      default: ++pe[m]; break;
    }
  }
  for (int m = 0; m < sched.ii; ++m) {
    if (in[m] > cfg.input_buses())
      complain("layer " + std::to_string(m) + ": " + std::to_string(in[m]) + " readings > " +
               std::to_string(cfg.input_buses()) + " input buses");
    if (out[m] > cfg.output_buses())
      complain("layer " + std::to_string(m) + ": " + std::to_string(out[m]) + " writings > " +
               std::to_string(cfg.output_buses()) + " output buses");
    if (pe[m] > cfg.pe_count())
      complain("layer " + std::to_string(m) + ": " + std::to_string(pe[m]) + " ops > " +
               std::to_string(cfg.pe_count()) + " PEs");
  }

  // Occupancy tables must agree with the recount.
  if (int(sched.t_pe.size()) == sched.ii && int(sched.t_in.size()) == sched.ii &&
      int(sched.t_out.size()) == sched.ii) {
    for (int m = 0; m < sched.ii; ++m) {
      if (sched.t_pe[m] != pe[m] || sched.t_in[m] != in[m] || sched.t_out[m] != out[m]) {
        complain("occupancy tables stale at layer " + std::to_string(m));
        break;
      }
    }
  } else {
    complain("occupancy tables missing or wrong length");
  }
  return problems;
}

}  // namespace sparsemap
