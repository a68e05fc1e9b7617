#include "sparsemap/conflict.hpp"

#include <algorithm>
#include <cassert>

namespace sparsemap {

namespace {

// producer quad reaches consumer quad one layer later
bool dist1_reachable(const Binding& u, const Binding& v) {
  if (u.row == v.row && u.col == v.col) return true;  // output register / LRF
  if (u.drive_row && u.row == v.row) return true;
  if (u.drive_col && u.col == v.col) return true;
  return false;
}

}  // namespace

Result<ConflictGraph> build_conflict_graph(const Sdfg& sdfg, const Schedule& sched,
                                           const CgraConfig& cfg, const RoutePlan& plan) {
  const int N = cfg.rows, M = cfg.cols;
  ConflictGraph g;
  g.dfg_nodes = int(sdfg.nodes.size());
  g.range.assign(sdfg.nodes.size(), {0, 0});

  // Count distance-1 internal consumers per node to prune drive combos:
  // no consumer means no reason to hold a bus, one consumer needs at most
  // one of the two.
  std::vector<int> d1_out(sdfg.nodes.size(), 0);
  for (const Edge& e : sdfg.edges)
    if (e.kind == EdgeKind::Internal && plan.at(e.src, e.dst) == RouteClass::Dist1)
      ++d1_out[e.src];

  for (const Node& n : sdfg.nodes) {
    if (!sched.scheduled(n.id))
      return Result<ConflictGraph>::fail("node " + std::to_string(n.id) + " unscheduled");
    int m = sched.modulo(n.id);
    int begin = int(g.verts.size());
    switch (n.kind) {
      case NodeKind::InputRead:
        for (int p = 0; p < M; ++p)
          g.verts.push_back({Binding::Kind::Read, n.id, m, p, -1, -1, false, false});
        break;
      case NodeKind::OutputWrite:
        for (int q = 0; q < N; ++q)
          g.verts.push_back({Binding::Kind::Write, n.id, m, q, -1, -1, false, false});
        break;
      default:
        for (int i = 0; i < N; ++i)
          for (int j = 0; j < M; ++j) {
            g.verts.push_back({Binding::Kind::Op, n.id, m, -1, i, j, false, false});
            if (d1_out[n.id] >= 1) {
              g.verts.push_back({Binding::Kind::Op, n.id, m, -1, i, j, true, false});
              g.verts.push_back({Binding::Kind::Op, n.id, m, -1, i, j, false, true});
            }
            if (d1_out[n.id] >= 2)
              g.verts.push_back({Binding::Kind::Op, n.id, m, -1, i, j, true, true});
          }
        break;
    }
    g.range[n.id] = {begin, int(g.verts.size())};
    if (begin == int(g.verts.size()))
      return Result<ConflictGraph>::fail("node " + std::to_string(n.id) + " has no candidates");
  }

  const int V = int(g.verts.size());
  g.adj = BitMatrix(V);
  std::size_t edges = 0;
  auto conflict = [&](int a, int b) {
    if (a == b || g.adj.get(a, b)) return;
    g.adj.set(a, b);
    ++edges;
  };

  // one binding per node
  for (const Node& n : sdfg.nodes) {
    auto [b, e] = g.range[n.id];
    for (int x = b; x < e; ++x)
      for (int y = x + 1; y < e; ++y) conflict(x, y);
  }

  // bucket vertices by physical bus claims per layer
  int layers = sched.ii;
  std::vector<std::vector<int>> read_on(layers * M), write_on(layers * N);
  std::vector<std::vector<int>> drive_r(layers * N), drive_c(layers * M);
  std::vector<std::vector<int>> on_pe(layers * N * M);
  for (int v = 0; v < V; ++v) {
    const Binding& b = g.verts[v];
    switch (b.kind) {
      case Binding::Kind::Read: read_on[b.layer * M + b.bus].push_back(v); break;
      case Binding::Kind::Write: write_on[b.layer * N + b.bus].push_back(v); break;
      case Binding::Kind::Op:
        on_pe[(b.layer * N + b.row) * M + b.col].push_back(v);
        if (b.drive_row) drive_r[b.layer * N + b.row].push_back(v);
        if (b.drive_col) drive_c[b.layer * M + b.col].push_back(v);
        break;
    }
  }
  auto pairwise_distinct_nodes = [&](const std::vector<int>& bucket) {
    for (std::size_t x = 0; x < bucket.size(); ++x)
      for (std::size_t y = x + 1; y < bucket.size(); ++y)
        if (g.verts[bucket[x]].node != g.verts[bucket[y]].node) conflict(bucket[x], bucket[y]);
  };
  for (auto& bkt : read_on) pairwise_distinct_nodes(bkt);    // bus exclusivity, readings
  for (auto& bkt : write_on) pairwise_distinct_nodes(bkt);   // bus exclusivity, writings
  for (auto& bkt : on_pe) pairwise_distinct_nodes(bkt);      // PE exclusivity
  for (auto& bkt : drive_r) pairwise_distinct_nodes(bkt);    // one driver per row bus
  for (auto& bkt : drive_c) pairwise_distinct_nodes(bkt);    // one driver per column bus

  // I/O traffic shuts internal driving of the same physical bus at its layer
  for (int v = 0; v < V; ++v) {
    const Binding& b = g.verts[v];
    if (b.kind == Binding::Kind::Read)
      for (int u : drive_c[b.layer * M + b.bus]) conflict(v, u);
    else if (b.kind == Binding::Kind::Write)
      for (int u : drive_r[b.layer * N + b.bus]) conflict(v, u);
  }

  // per-edge coupling
  for (const Edge& e : sdfg.edges) {
    RouteClass rc = plan.at(e.src, e.dst);
    if (rc == RouteClass::InputBus) {
      // consumers live in the reading's bus column
      auto [rb, re] = g.range[e.src];
      auto [ob, oe] = g.range[e.dst];
      for (int x = rb; x < re; ++x)
        for (int y = ob; y < oe; ++y)
          if (g.verts[y].col != g.verts[x].bus) conflict(x, y);
    } else if (rc == RouteClass::OutputBus) {
      // the producer lives in the writing's bus row
      auto [pb, pe] = g.range[e.src];
      auto [wb, we] = g.range[e.dst];
      for (int x = wb; x < we; ++x)
        for (int y = pb; y < pe; ++y)
          if (g.verts[y].row != g.verts[x].bus) conflict(x, y);
    } else if (rc == RouteClass::Dist1) {
      auto [ub, ue] = g.range[e.src];
      auto [vb, ve] = g.range[e.dst];
      for (int x = ub; x < ue; ++x)
        for (int y = vb; y < ve; ++y)
          if (!dist1_reachable(g.verts[x], g.verts[y])) conflict(x, y);
    }
    // Grf: crossbar reaches everything, no placement coupling
  }

  g.edge_count = edges;
  return Result<ConflictGraph>::ok(std::move(g));
}

}  // namespace sparsemap
