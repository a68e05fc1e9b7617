#include "sparsemap/validator.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace sparsemap {

namespace {

std::string node_tag(const Sdfg& g, NodeId v) {
  return to_string(g.nodes[v].kind) + "#" + std::to_string(v);
}

int ceil_div_pos(int a, int b) { return (a + b - 1) / b; }

bool op_like(NodeKind k) {
  return k == NodeKind::Mul || k == NodeKind::Add || k == NodeKind::Cop;
}

struct Check {
  std::vector<Violation> out;
  void flag(std::string rule, std::string detail) {
    out.push_back({std::move(rule), std::move(detail)});
  }
};

void check_schedule_shape(const Sdfg& g, const CgraConfig& cfg, const Schedule& s, Check& ck) {
  if (s.ii < 1) {
    ck.flag("interval", "initiation interval below one");
    return;
  }
  for (const Node& n : g.nodes)
    if (!s.scheduled(n.id)) ck.flag("unscheduled", node_tag(g, n.id));
  for (const Edge& e : g.edges) {
    if (!s.scheduled(e.src) || !s.scheduled(e.dst)) continue;
    int dist = s.time[e.dst] - s.time[e.src];
    bool ok = true;
    switch (e.kind) {
      case EdgeKind::Read: ok = dist == 0; break;
      case EdgeKind::Write: ok = dist == 1; break;
      case EdgeKind::Internal: ok = dist >= 1; break;
    }
    if (!ok)
      ck.flag("edge-timing", node_tag(g, e.src) + " -> " + node_tag(g, e.dst) + " spans " +
                                 std::to_string(dist) + " cycles as " + to_string(e.kind));
  }
  std::vector<int> reads(s.ii, 0), writes(s.ii, 0), ops(s.ii, 0);
  for (const Node& n : g.nodes) {
    if (!s.scheduled(n.id)) continue;
    int m = s.modulo(n.id);
    if (n.kind == NodeKind::InputRead) ++reads[m];
    if (n.kind == NodeKind::OutputWrite) ++writes[m];
    if (op_like(n.kind)) ++ops[m];
  }
  for (int m = 0; m < s.ii; ++m) {
    if (reads[m] > cfg.input_buses())
      ck.flag("layer-readings", "layer " + std::to_string(m) + " holds " +
                                    std::to_string(reads[m]) + " readings");
    if (writes[m] > cfg.output_buses())
      ck.flag("layer-writings", "layer " + std::to_string(m) + " holds " +
                                    std::to_string(writes[m]) + " writings");
    if (ops[m] > cfg.pe_count())
      ck.flag("layer-ops",
              "layer " + std::to_string(m) + " holds " + std::to_string(ops[m]) + " ops");
  }
}

void check_bindings(const Sdfg& g, const CgraConfig& cfg, const Schedule& s, const Mapping& mp,
                    Check& ck) {
  if (int(mp.bindings.size()) < int(g.nodes.size())) {
    ck.flag("binding-missing", "binding table shorter than the graph");
    return;
  }
  for (const Node& n : g.nodes) {
    const Binding& b = mp.bindings[n.id];
    if (b.node != n.id) {
      ck.flag("binding-missing", node_tag(g, n.id));
      continue;
    }
    if (s.scheduled(n.id) && b.layer != s.modulo(n.id))
      ck.flag("binding-layer", node_tag(g, n.id) + " bound at layer " + std::to_string(b.layer) +
                                   " but scheduled modulo " + std::to_string(s.modulo(n.id)));
    switch (n.kind) {
      case NodeKind::InputRead:
        if (b.kind != Binding::Kind::Read || b.bus < 0 || b.bus >= cfg.input_buses())
          ck.flag("binding-shape", node_tag(g, n.id) + " lacks a valid input bus");
        break;
      case NodeKind::OutputWrite:
        if (b.kind != Binding::Kind::Write || b.bus < 0 || b.bus >= cfg.output_buses())
          ck.flag("binding-shape", node_tag(g, n.id) + " lacks a valid output bus");
        break;
      default:
        if (b.kind != Binding::Kind::Op || b.row < 0 || b.row >= cfg.rows || b.col < 0 ||
            b.col >= cfg.cols)
          ck.flag("binding-shape", node_tag(g, n.id) + " lacks a valid array position");
        break;
    }
  }
}

void check_exclusivity(const Sdfg& g, const Schedule& s, const Mapping& mp, Check& ck) {
  std::map<std::tuple<int, int, int>, NodeId> pe_user;  // (layer,row,col)
  std::map<std::pair<int, int>, std::vector<NodeId>> col_bus, row_bus;
  for (const Node& n : g.nodes) {
    if (!s.scheduled(n.id)) continue;
    const Binding& b = mp.bindings[n.id];
    if (b.node != n.id) continue;
    int layer = s.modulo(n.id);
    if (n.kind == NodeKind::InputRead) {
      col_bus[{layer, b.bus}].push_back(n.id);
    } else if (n.kind == NodeKind::OutputWrite) {
      row_bus[{layer, b.bus}].push_back(n.id);
    } else {
      auto key = std::make_tuple(layer, b.row, b.col);
      auto [it, fresh] = pe_user.emplace(key, n.id);
      if (!fresh)
        ck.flag("pe-exclusive", node_tag(g, it->second) + " and " + node_tag(g, n.id) +
                                    " share PE (" + std::to_string(b.row) + "," +
                                    std::to_string(b.col) + ") at layer " + std::to_string(layer));
      if (b.drive_row) row_bus[{layer, b.row}].push_back(n.id);
      if (b.drive_col) col_bus[{layer, b.col}].push_back(n.id);
    }
  }
  auto report = [&](const char* rule, const auto& users) {
    for (const auto& [key, list] : users) {
      if (int(list.size()) <= 1) continue;
      std::string who;
      for (NodeId v : list) who += (who.empty() ? "" : ", ") + node_tag(g, v);
      ck.flag(rule, "layer " + std::to_string(key.first) + " bus " + std::to_string(key.second) +
                        " driven by " + who);
    }
  };
  report("col-bus-driver", col_bus);
  report("row-bus-driver", row_bus);
}

void check_routes(const Sdfg& g, const CgraConfig& cfg, const Schedule& s, const Mapping& mp,
                  Check& ck) {
  for (const Edge& e : g.edges) {
    if (!s.scheduled(e.src) || !s.scheduled(e.dst)) continue;
    auto it = mp.routes.find({e.src, e.dst});
    std::string tag = node_tag(g, e.src) + " -> " + node_tag(g, e.dst);
    if (it == mp.routes.end()) {
      ck.flag("route-missing", tag);
      continue;
    }
    const Route& r = it->second;
    const Binding& bu = mp.bindings[e.src];
    const Binding& bv = mp.bindings[e.dst];
    if (bu.node != e.src || bv.node != e.dst) continue;  // flagged already
    int dist = s.time[e.dst] - s.time[e.src];
    auto bad = [&](const std::string& why) { ck.flag("route-illegal", tag + ": " + why); };
    if (e.kind == EdgeKind::Read && r.kind != Route::Kind::InputBusDirect) {
      bad("reading consumed off the input bus");
      continue;
    }
    if (e.kind == EdgeKind::Write && r.kind != Route::Kind::OutputBusDirect) {
      bad("writing fed off the output bus");
      continue;
    }
    if (e.kind == EdgeKind::Internal && dist > 1 && r.kind != Route::Kind::Grf) {
      ck.flag("multicycle-register", tag + " spans " + std::to_string(dist) +
                                         " cycles outside the shared register file");
      continue;
    }
    switch (r.kind) {
      case Route::Kind::InputBusDirect:
        if (dist != 0) bad("input bus transfer must be same-cycle");
        if (r.index != bu.bus) bad("route bus differs from the reading's bus");
        if (bv.col != bu.bus) bad("consumer sits outside the bus column");
        break;
      case Route::Kind::OutputBusDirect:
        if (dist != 1) bad("output bus transfer must take one cycle");
        if (r.index != bv.bus) bad("route bus differs from the writing's bus");
        if (bu.row != bv.bus) bad("producer sits outside the bus row");
        break;
      case Route::Kind::SamePeLrf:
        if (dist != 1) bad("local register survives exactly one cycle");
        if (bu.row != bv.row || bu.col != bv.col) bad("endpoints on different PEs");
        break;
      case Route::Kind::RowBus:
        if (dist != 1) bad("bus forwarding must take one cycle");
        if (!bu.drive_row) bad("producer does not drive its row");
        if (bu.row != r.index || bv.row != r.index) bad("endpoints off the routed row");
        break;
      case Route::Kind::ColBus:
        if (dist != 1) bad("bus forwarding must take one cycle");
        if (!bu.drive_col) bad("producer does not drive its column");
        if (bu.col != r.index || bv.col != r.index) bad("endpoints off the routed column");
        break;
      case Route::Kind::Grf:
        if (e.kind != EdgeKind::Internal || dist < 1) bad("register file carries internal values");
        if (r.index < 0 || r.index >= cfg.grf_capacity) bad("slot outside register file");
        break;
    }
  }
}

void check_grf_pressure(const Sdfg& g, const CgraConfig& cfg, const Schedule& s, const Mapping& mp,
                        Check& ck) {
  struct Value {
    int slot = -1;
    int start = 0, end = 0;
    std::vector<NodeId> consumers;
  };
  std::map<NodeId, Value> vals;
  for (const auto& [edge, r] : mp.routes) {
    if (r.kind != Route::Kind::Grf) continue;
    auto [u, v] = edge;
    if (!s.scheduled(u) || !s.scheduled(v)) continue;
    Value& val = vals[u];
    if (val.consumers.empty()) {
      val.slot = r.index;
      val.start = s.time[u] + 1;
      val.end = val.start;
    } else if (val.slot != r.index) {
      ck.flag("grf-slot-split", node_tag(g, u) + " stored under two slots");
    }
    val.consumers.push_back(v);
    val.end = std::max(val.end, s.time[v]);
  }
  std::vector<int> writes(s.ii, 0), reads(s.ii, 0);
  for (const auto& [u, val] : vals) {
    ++writes[val.start % s.ii];
    std::vector<uint8_t> seen(s.ii, 0);  // crossbar broadcast: one read per value per cycle
    for (NodeId c : val.consumers) {
      int m = s.modulo(c);
      if (!seen[m]) {
        seen[m] = 1;
        ++reads[m];
      }
    }
  }
  for (int m = 0; m < s.ii; ++m) {
    if (writes[m] > cfg.grf_write_ports)
      ck.flag("grf-write-port", std::to_string(writes[m]) + " register writes land on cycle " +
                                    std::to_string(m));
    if (reads[m] > cfg.grf_read_ports)
      ck.flag("grf-read-port", std::to_string(reads[m]) + " register reads land on cycle " +
                                   std::to_string(m));
  }
  std::map<std::pair<int, int>, NodeId> cell;  // (slot, modulo cycle) -> producer
  for (const auto& [u, val] : vals) {
    if (val.slot < 0 || val.slot >= cfg.grf_capacity) continue;  // flagged as route-illegal
    int span = val.end - val.start + 1;
    for (int off = 0; off < std::min(span, s.ii); ++off) {
      int m = (val.start + off) % s.ii;
      auto [it, fresh] = cell.emplace(std::make_pair(val.slot, m), u);
      if (!fresh && it->second != u)
        ck.flag("grf-slot-overlap", node_tag(g, it->second) + " and " + node_tag(g, u) +
                                        " overlap in slot " + std::to_string(val.slot));
    }
  }
}

}  // namespace

std::vector<Violation> validate_mapping(const Sdfg& sdfg, const CgraConfig& cfg,
                                        const Schedule& sched, const Mapping& mapping) {
  Check ck;
  if (!cfg.valid()) {
    ck.flag("config", "inconsistent array configuration");
    return ck.out;
  }
  check_schedule_shape(sdfg, cfg, sched, ck);
  check_bindings(sdfg, cfg, sched, mapping, ck);
  if (!ck.out.empty()) return ck.out;  // exclusivity and routes assume sane bindings
  check_exclusivity(sdfg, sched, mapping, ck);
  check_routes(sdfg, cfg, sched, mapping, ck);
  check_grf_pressure(sdfg, cfg, sched, mapping, ck);
  return ck.out;
}

Recount recount_mapping(const Sdfg& sdfg, const Schedule& sched) {
  Recount rc;
  for (const Node& n : sdfg.nodes) {
    switch (n.kind) {
      case NodeKind::Cop: ++rc.cops; break;
      case NodeKind::InputRead: ++rc.readings; break;
      case NodeKind::OutputWrite: ++rc.writings; break;
      default: ++rc.ops; break;
    }
  }
  for (const Edge& e : sdfg.edges) {
    if (e.kind != EdgeKind::Internal) continue;
    if (sched.scheduled(e.src) && sched.scheduled(e.dst) &&
        sched.time[e.dst] - sched.time[e.src] > 1)
      ++rc.mcids;
  }
  return rc;
}

int lower_bound_ii(const Sdfg& sdfg, const CgraConfig& cfg) {
  int ops = 0, reads = 0, writes = 0;
  for (const Node& n : sdfg.nodes) {
    if (n.kind == NodeKind::Mul || n.kind == NodeKind::Add) ++ops;
    if (n.kind == NodeKind::InputRead) ++reads;
    if (n.kind == NodeKind::OutputWrite) ++writes;
  }
  int bound = std::max({ceil_div_pos(ops, cfg.pe_count()), ceil_div_pos(reads, cfg.input_buses()),
                        ceil_div_pos(writes, cfg.output_buses())});
  return std::max(bound, 1);
}

FunctionalReport functional_check(const SparseBlock& block, const Sdfg& sdfg,
                                  const CgraConfig& cfg, const Schedule& sched,
                                  const Mapping& mapping, const std::vector<long long>& inputs,
                                  const std::vector<long long>& weights) {
  FunctionalReport rep;
  if (int(inputs.size()) != block.channels ||
      int(weights.size()) != block.channels * block.kernels) {
    rep.problem = "stimulus shape does not match the block";
    return rep;
  }
  rep.expected.assign(block.kernels, 0);
  for (int c = 0; c < block.channels; ++c)
    for (int k = 0; k < block.kernels; ++k)
      if (block.mask[c][k]) rep.expected[k] += inputs[c] * weights[c * block.kernels + k];

  auto fail = [&](std::string why) {
    rep.problem = std::move(why);
    return rep;
  };
  std::vector<long long> value(sdfg.nodes.size(), 0);
  std::vector<int> indeg(sdfg.nodes.size(), 0);
  for (const Edge& e : sdfg.edges) ++indeg[e.dst];
  std::vector<NodeId> order;
  for (const Node& n : sdfg.nodes)
    if (indeg[n.id] == 0) order.push_back(n.id);
  for (std::size_t head = 0; head < order.size(); ++head)
    for (const Edge& e : sdfg.edges)
      if (e.src == order[head] && --indeg[e.dst] == 0) order.push_back(e.dst);
  if (order.size() != sdfg.nodes.size()) return fail("dependences form a cycle");
  rep.actual.assign(block.kernels, 0);
  for (NodeId v : order) {
    const Node& n = sdfg.nodes[v];
    if (!sched.scheduled(v)) return fail(node_tag(sdfg, v) + " never scheduled");
    std::vector<long long> arrived;
    for (const Edge& e : sdfg.edges) {
      if (e.dst != v) continue;
      auto it = mapping.routes.find({e.src, e.dst});
      if (it == mapping.routes.end())
        return fail("no route carries " + node_tag(sdfg, e.src) + " -> " + node_tag(sdfg, v));
      const Route& r = it->second;
      const Binding& bu = mapping.bindings[e.src];
      const Binding& bv = mapping.bindings[v];
      int dist = sched.time[v] - sched.time[e.src];
      bool reachable = false;
      switch (r.kind) {
        case Route::Kind::InputBusDirect:
          reachable = dist == 0 && bu.bus == r.index && bv.col == r.index;
          break;
        case Route::Kind::OutputBusDirect:
          reachable = dist == 1 && bv.bus == r.index && bu.row == r.index;
          break;
        case Route::Kind::SamePeLrf:
          reachable = dist == 1 && bu.row == bv.row && bu.col == bv.col;
          break;
        case Route::Kind::RowBus:
          reachable = dist == 1 && bu.drive_row && bu.row == r.index && bv.row == r.index;
          break;
        case Route::Kind::ColBus:
          reachable = dist == 1 && bu.drive_col && bu.col == r.index && bv.col == r.index;
          break;
        case Route::Kind::Grf:
          reachable = dist >= 1 && r.index >= 0 && r.index < cfg.grf_capacity;
          break;
      }
      if (!reachable)
        return fail(node_tag(sdfg, e.src) + " -> " + node_tag(sdfg, v) +
                    " routed where the fabric cannot carry it");
      arrived.push_back(value[e.src]);
    }
    switch (n.kind) {
      case NodeKind::InputRead:
        if (!arrived.empty()) return fail(node_tag(sdfg, v) + " has producers");
        if (n.channel < 0 || n.channel >= block.channels)
          return fail(node_tag(sdfg, v) + " reads outside the block");
        value[v] = inputs[n.channel];
        break;
      case NodeKind::Mul: {
        if (arrived.size() != 1) return fail(node_tag(sdfg, v) + " needs exactly one operand");
        if (n.channel < 0 || n.kernel < 0) return fail(node_tag(sdfg, v) + " lost its indices");
        value[v] = arrived[0] * weights[n.channel * block.kernels + n.kernel];
        break;
      }
      case NodeKind::Add:
        if (arrived.size() != 2) return fail(node_tag(sdfg, v) + " needs exactly two operands");
        value[v] = arrived[0] + arrived[1];
        break;
      case NodeKind::Cop:
        if (arrived.size() != 1) return fail(node_tag(sdfg, v) + " needs exactly one operand");
        value[v] = arrived[0];
        break;
      case NodeKind::OutputWrite:
        if (arrived.size() != 1) return fail(node_tag(sdfg, v) + " needs exactly one operand");
        if (n.kernel < 0 || n.kernel >= block.kernels)
          return fail(node_tag(sdfg, v) + " writes outside the block");
        value[v] = arrived[0];
        rep.actual[n.kernel] = arrived[0];
        break;
    }
  }
  rep.ok = rep.actual == rep.expected;
  if (!rep.ok && rep.problem.empty()) rep.problem = "kernel outputs differ from the reference";
  return rep;
}

}  // namespace sparsemap
