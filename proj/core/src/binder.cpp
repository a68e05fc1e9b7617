#include "sparsemap/binder.hpp"

#include <algorithm>
#include <utility>

namespace sparsemap {

namespace {

Result<Route> resolve_dist1(const Binding& bu, const Binding& bv, const CgraConfig& cfg) {
  if (bu.row == bv.row && bu.col == bv.col)
    return Result<Route>::ok({Route::Kind::SamePeLrf, bu.row * cfg.cols + bu.col});
  if (bu.drive_row && bu.row == bv.row) return Result<Route>::ok({Route::Kind::RowBus, bu.row});
  if (bu.drive_col && bu.col == bv.col) return Result<Route>::ok({Route::Kind::ColBus, bu.col});
  return Result<Route>::fail("producer cannot reach consumer in one cycle");
}

}  // namespace

ExtractOutcome extract_mapping(const ConflictGraph& cg, const Sdfg& sdfg, const Schedule& sched,
                               const RoutePlan& plan, const std::vector<int>& mis,
                               const CgraConfig& cfg) {
  ExtractOutcome out;
  out.mapping.ii = sched.ii;
  out.mapping.bindings.resize(sdfg.nodes.size());
  for (int idx : mis) {
    const Binding& b = cg.verts[idx];
    out.mapping.bindings[b.node] = b;
  }
  for (const Node& n : sdfg.nodes) {
    if (cg.candidate_count(n.id) > 0 && out.mapping.bindings[n.id].node == kNoNode)
      out.unbound.push_back(n.id);
  }
  for (const auto& [edge, cls] : plan.cls) {
    const auto [u, v] = edge;
    const Binding& bu = out.mapping.bindings[u];
    const Binding& bv = out.mapping.bindings[v];
    if (bu.node == kNoNode || bv.node == kNoNode) continue;
    switch (cls) {
      case RouteClass::InputBus:
        out.mapping.routes[edge] = {Route::Kind::InputBusDirect, bu.bus};
        break;
      case RouteClass::OutputBus:
        out.mapping.routes[edge] = {Route::Kind::OutputBusDirect, bv.bus};
        break;
      case RouteClass::Grf:
        out.mapping.routes[edge] = {Route::Kind::Grf, plan.grf_slot(u)};
        break;
      case RouteClass::Dist1: {
        auto r = resolve_dist1(bu, bv, cfg);
        if (!r) {
          out.unbound.push_back(v);
          continue;
        }
        out.mapping.routes[edge] = r.value();
        break;
      }
    }
  }
  std::sort(out.unbound.begin(), out.unbound.end());
  out.unbound.erase(std::unique(out.unbound.begin(), out.unbound.end()), out.unbound.end());
  out.mapping.complete = out.unbound.empty();
  return out;
}

MapResult map_with_retries(const Sdfg& sdfg, const CgraConfig& cfg, const SchedulerOptions& sopts,
                           const BinderOptions& bopts) {
  MapResult out;
  out.metrics.mii = calculate_mii(sdfg, cfg);
  SchedulerOptions so = sopts;
  bool first = true;
  for (;;) {
    auto sr = schedule_loop(sdfg, cfg, so);
    if (!sr) {
      out.failure = sr.error();
      return out;
    }
    ScheduleResult s = std::move(sr.value());
    if (first) {
      out.metrics.ii_first_attempt = s.schedule.ii;
      out.metrics.cops = s.sdfg.cop_count();
      auto mc = mcid_set(s.sdfg, s.schedule);
      out.metrics.mcids = mc ? int(mc.value().size()) : 0;
    }
    auto escalate = [&](std::string why) {
      if (first) {
        out.metrics.first_attempt_success = false;
        first = false;
      }
      out.failure = std::move(why);
      so.min_ii = s.schedule.ii + 1;
      return so.min_ii <= so.max_ii;
    };

    auto rp = preallocate_routes(s.sdfg, s.schedule, cfg);
    if (!rp) {
      if (!escalate(rp.error())) return out;
      continue;
    }
    auto cgr = build_conflict_graph(s.sdfg, s.schedule, cfg, rp.value());
    if (!cgr) {
      if (!escalate(cgr.error())) return out;
      continue;
    }
    const ConflictGraph& cg = cgr.value();
    const int target = cg.dfg_nodes;
    const bool exact = int(cg.verts.size()) <= bopts.mis.exact_threshold;
    std::vector<int> best;
    for (int k = 0; k < std::max(1, bopts.mis_seeds); ++k) {
      MisOptions mo = bopts.mis;
      mo.seed = bopts.mis.seed + uint64_t(k);
      mo.target = target;
      auto set = solve_mis(cg.adj, mo);
      if (set.size() > best.size()) best = std::move(set);
      if (int(best.size()) >= target || exact) break;
    }
    if (int(best.size()) < target) {
      if (!escalate("no conflict-free placement covers the graph at II=" +
                    std::to_string(s.schedule.ii)))
        return out;
      continue;
    }
    auto ex = extract_mapping(cg, s.sdfg, s.schedule, rp.value(), best, cfg);
    if (!ex.mapping.complete) {
      if (!escalate("placement left nodes unreachable at II=" + std::to_string(s.schedule.ii)))
        return out;
      continue;
    }
    out.success = true;
    out.sdfg = std::move(s.sdfg);
    out.schedule = std::move(s.schedule);
    out.plan = std::move(rp.value());
    out.mapping = std::move(ex.mapping);
    out.metrics.mapped = true;
    out.metrics.final_ii = out.schedule.ii;
    if (first) out.metrics.first_attempt_success = true;
    out.failure.clear();
    return out;
  }
}

}  // namespace sparsemap
