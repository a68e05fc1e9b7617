#include "sparsemap/scheduler.hpp"

#include <algorithm>
#include <cassert>
#include <limits>

namespace sparsemap {
namespace {

int ceil_div(int a, int b) { return (a + b - 1) / b; }

void ensure_size(Schedule& sched, const Sdfg& sdfg) { sched.resize(sdfg.nodes.size()); }

std::vector<NodeId> unscheduled_mul_fanout(const Sdfg& sdfg, const Schedule& sched, NodeId r) {
  std::vector<NodeId> out;
  for (const Edge& e : sdfg.edges)
    if (e.src == r && sdfg.nodes[e.dst].kind == NodeKind::Mul && !sched.scheduled(e.dst))
      out.push_back(e.dst);
  std::sort(out.begin(), out.end());
  return out;
}

void rewire_edge_src(Sdfg& sdfg, NodeId old_src, NodeId dst, NodeId new_src) {
  for (Edge& e : sdfg.edges) {
    if (e.src == old_src && e.dst == dst) {
      e.src = new_src;
      e.kind = Sdfg::classify(sdfg.nodes[new_src].kind, sdfg.nodes[dst].kind);
      return;
    }
  }
  assert(false && "edge to rewire not found");
}

void remove_edge(Sdfg& sdfg, NodeId src, NodeId dst) {
  for (std::size_t i = 0; i < sdfg.edges.size(); ++i) {
    if (sdfg.edges[i].src == src && sdfg.edges[i].dst == dst) {
      sdfg.edges.erase(sdfg.edges.begin() + i);
      return;
    }
  }
  assert(false && "edge to remove not found");
}

// Drop the lowering-time adder tree (add ids are recycled in build order) and
// the root-to-write edge so reconstruction can rewire from scratch.
void detach_kernel_tree(Sdfg& sdfg, KernelGroup& kg) {
  for (NodeId add : kg.adds) {
    for (auto it = sdfg.edges.begin(); it != sdfg.edges.end();)
      it = (it->dst == add) ? sdfg.edges.erase(it) : it + 1;
  }
  NodeId old_root = sdfg.single_producer(kg.write);
  if (old_root != kNoNode) remove_edge(sdfg, old_root, kg.write);
}

}  // namespace

int calculate_mii(const Sdfg& sdfg, const CgraConfig& cfg) {
  int ops = sdfg.op_count();
  int reads = sdfg.read_count();
  int writes = sdfg.write_count();
  int mii = std::max({ceil_div(ops, cfg.pe_count()), ceil_div(reads, cfg.input_buses()),
                      ceil_div(writes, cfg.output_buses())});
  return std::max(mii, 1);
}

NodeId aiba_select(const Sdfg& sdfg, const std::vector<NodeId>& unscheduled,
                   const std::vector<NodeId>& scheduled_at_t, const AssociationMatrix& assoc) {
  assert(!unscheduled.empty());
  NodeId best = kNoNode;
  long long best_score = std::numeric_limits<long long>::min();
  int best_fanout = -1;
  for (NodeId r : unscheduled) {
    int ch = sdfg.nodes[r].channel;
    long long score = 0;
    for (NodeId s : scheduled_at_t) score += assoc.at(ch, sdfg.nodes[s].channel);
    int fanout = int(sdfg.consumers(r).size());
    bool better = score > best_score ||
                  (score == best_score &&
                   (fanout > best_fanout || (fanout == best_fanout && r < best)));
    if (better) {
      best = r;
      best_score = score;
      best_fanout = fanout;
    }
  }
  return best;
}

bool mul_ci(Sdfg& sdfg, Schedule& sched, const CgraConfig& cfg, NodeId reading, int t) {
  const int N = cfg.rows, M = cfg.cols;
  int m = t % sched.ii;
  std::vector<NodeId> fanout = unscheduled_mul_fanout(sdfg, sched, reading);
  int f = int(fanout.size());
  assert(f > N && "multicast is for fan-out beyond one bus");
  if (f <= N) return false;

  int groups = ceil_div(f, N);
  int extra = groups - 1;
  if (sched.t_in[m] + extra > M) return false;  // not enough free buses this layer

  assert(f + sched.t_pe[m] <= N * M);
  for (int g = 1; g < groups; ++g) {
    NodeId clone = sdfg.add_node(NodeKind::InputRead, -1, sdfg.nodes[reading].channel);
    ensure_size(sched, sdfg);
    sched.time[clone] = t;
    sched.bus[clone] = sched.t_in[m];
    ++sched.t_in[m];
    for (int i = g * N; i < std::min((g + 1) * N, f); ++i)
      rewire_edge_src(sdfg, reading, fanout[i], clone);
  }
  for (NodeId mul : fanout) sched.time[mul] = t;
  sched.t_pe[m] += f;
  sched.multicast[reading] = 1;
  return true;
}

bool sched_with_caching(Sdfg& sdfg, Schedule& sched, const CgraConfig& cfg, NodeId reading,
                        int t) {
  const int N = cfg.rows, M = cfg.cols;
  (void)M;
  const int pes = cfg.pe_count();
  const int ii = sched.ii;
  int m = t % ii;
  std::vector<NodeId> fanout = unscheduled_mul_fanout(sdfg, sched, reading);
  int f = int(fanout.size());
  if (f == 0) return true;

  if (f <= N && f + sched.t_pe[m] <= pes) {  // fits directly, nothing to cache
    for (NodeId mul : fanout) sched.time[mul] = t;
    sched.t_pe[m] += f;
    return true;
  }

  // Plan the chain before touching anything. Wave 0 shares the bus column
  // with the first Cop, later waves hang off the previous Cop.
  struct Wave {
    int time;
    int muls;
    bool chain;  // a further Cop follows at this slot
  };
  std::vector<int> planned(ii, 0);  // our own additions per layer
  std::vector<Wave> waves;
  int remaining = f;
  int cops = 0;
  {
    int free0 = pes - sched.t_pe[m];
    if (free0 < 1) return false;  // no room for the Cop itself
    int direct = std::min({N - 1, free0 - 1, remaining});
    waves.push_back({t, direct, true});
    planned[m] += direct + 1;
    remaining -= direct;
    cops = 1;
  }
  int tt = t;
  while (remaining > 0) {
    ++tt;
    int lay = tt % ii;
    int free_k = pes - sched.t_pe[lay] - planned[lay];
    if (remaining <= std::min(N - 1, free_k)) {
      waves.push_back({tt, remaining, false});
      planned[lay] += remaining;
      remaining = 0;
      break;
    }
    // needs another Cop after this wave
    if (free_k < 1) return false;  // chain breaks, the datum cannot survive
    if (++cops > ii) return false;
    int g = std::min({N - 1, free_k - 1, remaining});
    waves.push_back({tt, g, true});
    planned[lay] += g + 1;
    remaining -= g;
  }

  // Apply: Cops first so deferred muls can point at them.
  NodeId prev = reading;
  std::size_t next_mul = 0;
  for (const Wave& w : waves) {
    int lay = w.time % ii;
    for (int i = 0; i < w.muls; ++i) {
      NodeId mul = fanout[next_mul++];
      if (prev != reading) rewire_edge_src(sdfg, reading, mul, prev);
      sched.time[mul] = w.time;
      ++sched.t_pe[lay];
    }
    if (w.chain) {
      NodeId cop = sdfg.add_node(NodeKind::Cop, -1, sdfg.nodes[reading].channel);
      ensure_size(sched, sdfg);
      sdfg.add_edge(prev, cop);
      sched.time[cop] = w.time;
      ++sched.t_pe[lay];
      prev = cop;
    }
  }
  assert(next_mul == fanout.size());
  sched.cached[reading] = 1;
  return true;
}

bool sched_remain_mults(Sdfg& sdfg, Schedule& sched, const CgraConfig& cfg) {
  const int pes = cfg.pe_count();
  for (const Node& n : sdfg.nodes) {
    if (n.kind != NodeKind::Mul || sched.scheduled(n.id)) continue;
    NodeId p = sdfg.single_producer(n.id);
    if (p == kNoNode || !sched.scheduled(p)) return false;
    if (sdfg.nodes[p].kind == NodeKind::InputRead) {
      // bus data exists for one cycle only
      int t = sched.time[p];
      if (sched.t_pe[t % sched.ii] >= pes) return false;
      sched.time[n.id] = t;
      ++sched.t_pe[t % sched.ii];
      continue;
    }
    bool placed = false;
    for (int t = sched.time[p] + 1; t <= sched.time[p] + sched.ii; ++t) {
      if (sched.t_pe[t % sched.ii] < pes) {
        sched.time[n.id] = t;
        ++sched.t_pe[t % sched.ii];
        placed = true;
        break;
      }
    }
    if (!placed) return false;
  }
  return true;
}

bool rid_at(Sdfg& sdfg, Schedule& sched, const CgraConfig& cfg, int kernel) {
  KernelGroup& kg = sdfg.kernels[kernel];
  const int pes = cfg.pe_count();
  const int ii = sched.ii;

  for (NodeId mul : kg.muls)
    if (!sched.scheduled(mul)) return false;

  detach_kernel_tree(sdfg, kg);

  if (kg.muls.size() <= 1) {
    if (!kg.muls.empty()) sdfg.add_edge(kg.muls.front(), kg.write);
    return true;
  }

  auto earlier = [&](NodeId a, NodeId b) {
    return sched.time[a] != sched.time[b] ? sched.time[a] < sched.time[b] : a < b;
  };
  std::vector<NodeId> unacc = kg.muls;
  std::sort(unacc.begin(), unacc.end(), earlier);

  std::size_t next_add = 0;
  int t0 = sched.time[unacc.front()];
  while (unacc.size() > 1) {
    int t1 = t0 + 1;
    bool two_ready = unacc.size() >= 2 && sched.time[unacc[0]] < t1 && sched.time[unacc[1]] < t1;
    if (two_ready && sched.t_pe[t1 % ii] < pes) {
      NodeId a = unacc[0], b = unacc[1];
      assert(next_add < kg.adds.size());
      NodeId v = kg.adds[next_add++];
      sdfg.add_edge(a, v);
      sdfg.add_edge(b, v);
      sched.time[v] = t1;
      ++sched.t_pe[t1 % ii];
      unacc.erase(unacc.begin(), unacc.begin() + 2);
      unacc.insert(std::lower_bound(unacc.begin(), unacc.end(), v, earlier), v);
    } else {
      ++t0;
      int latest = sched.time[unacc.back()];
      if (t0 > latest + ii + 1) return false;  // PEs saturated at every residue
    }
  }
  assert(next_add == kg.adds.size());
  sdfg.add_edge(unacc.front(), kg.write);
  return true;
}

bool rid_at_all(Sdfg& sdfg, Schedule& sched, const CgraConfig& cfg) {
  const int pes = cfg.pe_count();
  const int ii = sched.ii;
  auto earlier = [&](NodeId a, NodeId b) {
    return sched.time[a] != sched.time[b] ? sched.time[a] < sched.time[b] : a < b;
  };

  struct Pending {
    int kernel;
    std::vector<NodeId> unacc;  // sorted by (time, id)
    std::size_t next_add = 0;
    int t1 = 0;  // layer the next add is aiming for
  };
  std::vector<Pending> live;
  for (KernelGroup& kg : sdfg.kernels) {
    for (NodeId mul : kg.muls)
      if (!sched.scheduled(mul)) return false;
    detach_kernel_tree(sdfg, kg);
    if (kg.muls.size() <= 1) {
      if (!kg.muls.empty()) sdfg.add_edge(kg.muls.front(), kg.write);
      continue;
    }
    Pending p;
    p.kernel = kg.kernel;
    p.unacc = kg.muls;
    std::sort(p.unacc.begin(), p.unacc.end(), earlier);
    p.t1 = sched.time[p.unacc.front()] + 1;
    live.push_back(std::move(p));
  }

  auto ready = [&](const Pending& p, int t) {
    return p.unacc.size() > 1 && p.t1 == t && sched.time[p.unacc[0]] < t &&
           sched.time[p.unacc[1]] < t && sched.t_pe[t % ii] < pes;
  };
  auto place = [&](Pending& p, int t) {
    KernelGroup& kg = sdfg.kernels[p.kernel];
    NodeId a = p.unacc[0], b = p.unacc[1];
    assert(p.next_add < kg.adds.size());
    NodeId v = kg.adds[p.next_add++];
    sdfg.add_edge(a, v);
    sdfg.add_edge(b, v);
    sched.time[v] = t;
    ++sched.t_pe[t % ii];
    p.unacc.erase(p.unacc.begin(), p.unacc.begin() + 2);
    p.unacc.insert(std::lower_bound(p.unacc.begin(), p.unacc.end(), v, earlier), v);
  };

  while (true) {
    int t = std::numeric_limits<int>::max();
    for (const Pending& p : live)
      if (p.unacc.size() > 1) t = std::min(t, p.t1);
    if (t == std::numeric_limits<int>::max()) break;

    // Kernels with more left to fold win the contested slots; operands hot
    // off the previous layer break ties so they pair before going stale.
    while (true) {
      Pending* best = nullptr;
      auto hot = [&](const Pending& p) {
        return int(sched.time[p.unacc[0]] == t - 1) + int(sched.time[p.unacc[1]] == t - 1);
      };
      for (Pending& p : live) {
        if (!ready(p, t)) continue;
        if (!best || p.unacc.size() > best->unacc.size() ||
            (p.unacc.size() == best->unacc.size() && hot(p) > hot(*best)))
          best = &p;
      }
      if (!best) break;
      place(*best, t);
    }
    for (Pending& p : live) {
      if (p.unacc.size() <= 1 || p.t1 != t) continue;
      ++p.t1;
      if (p.t1 > sched.time[p.unacc.back()] + ii + 2)
        return false;  // PEs saturated at every residue
    }
  }

  for (Pending& p : live) {
    assert(p.next_add == sdfg.kernels[p.kernel].adds.size());
    sdfg.add_edge(p.unacc.front(), sdfg.kernels[p.kernel].write);
  }
  return true;
}

bool asap_fixed_tree(Sdfg& sdfg, Schedule& sched, const CgraConfig& cfg, int kernel) {
  KernelGroup& kg = sdfg.kernels[kernel];
  const int pes = cfg.pe_count();
  // build order is topological
  for (NodeId add : kg.adds) {
    int ready = 0;
    for (NodeId p : sdfg.producers(add)) {
      if (!sched.scheduled(p)) return false;
      ready = std::max(ready, sched.time[p] + 1);
    }
    bool placed = false;
    for (int t = ready; t < ready + sched.ii; ++t) {
      if (sched.t_pe[t % sched.ii] < pes) {
        sched.time[add] = t;
        ++sched.t_pe[t % sched.ii];
        placed = true;
        break;
      }
    }
    if (!placed) return false;
  }
  return true;
}

bool sched_writings(Sdfg& sdfg, Schedule& sched, const CgraConfig& cfg) {
  const int N = cfg.rows;
  const int ii = sched.ii;

  std::vector<int> order;
  for (const KernelGroup& kg : sdfg.kernels) order.push_back(kg.kernel);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    NodeId ra = sdfg.kernel_root(sdfg.kernels[a]);
    NodeId rb = sdfg.kernel_root(sdfg.kernels[b]);
    int ta = sched.time[ra], tb = sched.time[rb];
    return ta != tb ? ta < tb : a < b;
  });

  for (int k : order) {
    KernelGroup& kg = sdfg.kernels[k];
    NodeId root = sdfg.kernel_root(kg);
    if (root == kNoNode || !sched.scheduled(root)) return false;
    int t2 = sched.time[root];
    int t3 = t2 + 1;
    if (sched.t_out[t3 % ii] < N) {
      sched.time[kg.write] = t3;
      sched.bus[kg.write] = sched.t_out[t3 % ii];
      ++sched.t_out[t3 % ii];
      continue;
    }
    // Output buses busy at t2+1: bridge with a Cop whose own slot and the
    // following write slot are both free.
    bool placed = false;
    for (int tc = t2 + 1; tc <= t2 + ii; ++tc) {
      if (sched.t_pe[tc % ii] >= cfg.pe_count()) continue;
      if (sched.t_out[(tc + 1) % ii] >= N) continue;
      NodeId cop = sdfg.add_node(NodeKind::Cop, k);
      ensure_size(sched, sdfg);
      remove_edge(sdfg, root, kg.write);
      sdfg.add_edge(root, cop);
      sdfg.add_edge(cop, kg.write);
      sched.time[cop] = tc;
      ++sched.t_pe[tc % ii];
      sched.time[kg.write] = tc + 1;
      sched.bus[kg.write] = sched.t_out[(tc + 1) % ii];
      ++sched.t_out[(tc + 1) % ii];
      placed = true;
      break;
    }
    if (!placed) return false;
  }
  return true;
}

namespace {

bool schedule_attempt(Sdfg& sdfg, Schedule& sched, const CgraConfig& cfg,
                      const SchedulerOptions& opts, const AssociationMatrix& assoc, int ii) {
  const int N = cfg.rows, M = cfg.cols;
  sched = Schedule{};
  sched.ii = ii;
  sched.t_pe.assign(ii, 0);
  sched.t_in.assign(ii, 0);
  sched.t_out.assign(ii, 0);
  ensure_size(sched, sdfg);

  std::vector<NodeId> pending;
  for (const Node& n : sdfg.nodes)
    if (n.kind == NodeKind::InputRead) pending.push_back(n.id);
  std::sort(pending.begin(), pending.end());

  const int t_guard = ii * (int(pending.size()) + 2) + 64;
  int t = 0;
  while (!pending.empty()) {
    int m = t % ii;
    if (sched.t_in[m] + 1 > M) {
      if (++t > t_guard) return false;
      continue;
    }
    NodeId r;
    if (opts.aiba()) {
      std::vector<NodeId> at_t;
      for (const Node& n : sdfg.nodes)
        if (n.kind == NodeKind::InputRead && sched.scheduled(n.id) && sched.time[n.id] == t)
          at_t.push_back(n.id);
      r = aiba_select(sdfg, pending, at_t, assoc);
    } else {
      r = pending.front();
    }
    sched.time[r] = t;
    sched.bus[r] = sched.t_in[m];
    ++sched.t_in[m];
    pending.erase(std::find(pending.begin(), pending.end(), r));

    std::vector<NodeId> fanout = unscheduled_mul_fanout(sdfg, sched, r);
    int f = int(fanout.size());
    if (f + sched.t_pe[m] <= N * M) {
      if (f <= N) {
        for (NodeId mul : fanout) sched.time[mul] = t;
        sched.t_pe[m] += f;
        continue;
      }
      if (opts.mulci() && mul_ci(sdfg, sched, cfg, r, t)) continue;
      if (sched_with_caching(sdfg, sched, cfg, r, t)) continue;
      return false;
    }
    if (sched_with_caching(sdfg, sched, cfg, r, t)) continue;
    return false;
  }

  if (!sched_remain_mults(sdfg, sched, cfg)) return false;
  if (opts.ridat()) {
    if (!rid_at_all(sdfg, sched, cfg)) return false;
  } else {
    for (const KernelGroup& kg : sdfg.kernels)
      if (!asap_fixed_tree(sdfg, sched, cfg, kg.kernel)) return false;
  }
  return sched_writings(sdfg, sched, cfg);
}

}  // namespace

Result<ScheduleResult> schedule_loop(const Sdfg& sdfg, const CgraConfig& cfg,
                                     const SchedulerOptions& opts) {
  std::string why;
  if (!cfg.valid(&why)) return Result<ScheduleResult>::fail("bad config: " + why);
  int mii = calculate_mii(sdfg, cfg);
  int start = std::max({mii, opts.min_ii, 1});
  if (opts.max_ii < start)
    return Result<ScheduleResult>::fail("max_ii " + std::to_string(opts.max_ii) +
                                        " below starting II " + std::to_string(start));
  AssociationMatrix assoc = association_matrix(sdfg);

  // Any dead end throws away the whole attempt: a fresh copy of the input
  // graph per II keeps restarts clean of stale Cops, clones and tree edits.
  for (int ii = start; ii <= opts.max_ii; ++ii) {
    Sdfg work = sdfg;
    Schedule sched;
    if (schedule_attempt(work, sched, cfg, opts, assoc, ii)) {
      ScheduleResult r{std::move(work), std::move(sched), mii};
      return Result<ScheduleResult>::ok(std::move(r));
    }
  }
  return Result<ScheduleResult>::fail("no feasible schedule up to II=" +
                                      std::to_string(opts.max_ii));
}

Result<ScheduleResult> baseline_schedule(const Sdfg& sdfg, const CgraConfig& cfg, int max_ii) {
  SchedulerOptions opts;
  opts.baseline_mode = true;
  opts.max_ii = max_ii;
  return schedule_loop(sdfg, cfg, opts);
}

}  // namespace sparsemap
