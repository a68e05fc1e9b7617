#include "sparsemap/io.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"

namespace sparsemap {

using nlohmann::json;

namespace {

const char* kind_name(NodeKind k) {
  switch (k) {
    case NodeKind::Mul: return "mul";
    case NodeKind::Add: return "add";
    case NodeKind::InputRead: return "read";
    case NodeKind::OutputWrite: return "write";
    case NodeKind::Cop: return "cop";
  }
  return "?";
}

Result<NodeKind> kind_of(const std::string& s) {
  if (s == "mul") return Result<NodeKind>::ok(NodeKind::Mul);
  if (s == "add") return Result<NodeKind>::ok(NodeKind::Add);
  if (s == "read") return Result<NodeKind>::ok(NodeKind::InputRead);
  if (s == "write") return Result<NodeKind>::ok(NodeKind::OutputWrite);
  if (s == "cop") return Result<NodeKind>::ok(NodeKind::Cop);
  return Result<NodeKind>::fail("unknown node kind " + s);
}

const char* route_name(Route::Kind k) {
  switch (k) {
    case Route::Kind::SamePeLrf: return "lrf";
    case Route::Kind::RowBus: return "row";
    case Route::Kind::ColBus: return "col";
    case Route::Kind::InputBusDirect: return "ibus";
    case Route::Kind::OutputBusDirect: return "obus";
    case Route::Kind::Grf: return "grf";
  }
  return "?";
}

Result<Route::Kind> route_of(const std::string& s) {
  if (s == "lrf") return Result<Route::Kind>::ok(Route::Kind::SamePeLrf);
  if (s == "row") return Result<Route::Kind>::ok(Route::Kind::RowBus);
  if (s == "col") return Result<Route::Kind>::ok(Route::Kind::ColBus);
  if (s == "ibus") return Result<Route::Kind>::ok(Route::Kind::InputBusDirect);
  if (s == "obus") return Result<Route::Kind>::ok(Route::Kind::OutputBusDirect);
  if (s == "grf") return Result<Route::Kind>::ok(Route::Kind::Grf);
  return Result<Route::Kind>::fail("unknown route kind " + s);
}

json config_json(const CgraConfig& c) {
  return json{{"rows", c.rows},
              {"cols", c.cols},
              {"lrf_capacity", c.lrf_capacity},
              {"grf_capacity", c.grf_capacity},
              {"grf_write_ports", c.grf_write_ports},
              {"grf_read_ports", c.grf_read_ports}};
}

CgraConfig config_from(const json& j) {
  CgraConfig c;
  c.rows = j.value("rows", c.rows);
  c.cols = j.value("cols", c.cols);
  c.lrf_capacity = j.value("lrf_capacity", c.lrf_capacity);
  c.grf_capacity = j.value("grf_capacity", c.grf_capacity);
  c.grf_write_ports = j.value("grf_write_ports", c.grf_write_ports);
  c.grf_read_ports = j.value("grf_read_ports", c.grf_read_ports);
  return c;
}

json block_json(const SparseBlock& b) {
  json rows = json::array();
  for (const auto& row : b.mask) {
    json r = json::array();
    for (uint8_t w : row) r.push_back(int(w));
    rows.push_back(std::move(r));
  }
  return json{{"name", b.name},         {"channels", b.channels}, {"kernels", b.kernels},
              {"mask", std::move(rows)}, {"seed", b.seed},        {"resamples", b.resamples}};
}

Result<SparseBlock> block_from(const json& j) {
  SparseBlock b;
  b.name = j.value("name", "");
  b.channels = j.value("channels", 0);
  b.kernels = j.value("kernels", 0);
  b.seed = j.value("seed", uint64_t(0));
  b.resamples = j.value("resamples", 0);
  if (!j.contains("mask") || !j["mask"].is_array())
    return Result<SparseBlock>::fail("block has no mask");
  for (const auto& row : j["mask"]) {
    std::vector<uint8_t> r;
    for (const auto& w : row) r.push_back(uint8_t(int(w) != 0));
    b.mask.push_back(std::move(r));
  }
  std::string why;
  if (!b.valid(&why)) return Result<SparseBlock>::fail("malformed block: " + why);
  return Result<SparseBlock>::ok(std::move(b));
}

json sdfg_json(const Sdfg& g) {
  json nodes = json::array(), edges = json::array(), kernels = json::array();
  for (const Node& n : g.nodes)
    nodes.push_back(
        json{{"id", n.id}, {"kind", kind_name(n.kind)}, {"kernel", n.kernel}, {"channel", n.channel}});
  for (const Edge& e : g.edges) edges.push_back(json{{"src", e.src}, {"dst", e.dst}});
  for (const KernelGroup& kg : g.kernels)
    kernels.push_back(
        json{{"kernel", kg.kernel}, {"muls", kg.muls}, {"adds", kg.adds}, {"write", kg.write}});
  return json{{"nodes", std::move(nodes)}, {"edges", std::move(edges)},
              {"kernels", std::move(kernels)}};
}

Result<Sdfg> sdfg_from(const json& j) {
  Sdfg g;
  for (const auto& n : j.at("nodes")) {
    auto k = kind_of(n.at("kind"));
    if (!k) return Result<Sdfg>::fail(k.error());
    NodeId id = g.add_node(k.value(), n.value("kernel", -1), n.value("channel", -1));
    if (id != n.at("id").get<int>()) return Result<Sdfg>::fail("node ids not dense");
  }
  for (const auto& e : j.at("edges")) g.add_edge(e.at("src"), e.at("dst"));
  for (const auto& kj : j.at("kernels")) {
    KernelGroup kg;
    kg.kernel = kj.at("kernel");
    kg.muls = kj.at("muls").get<std::vector<NodeId>>();
    kg.adds = kj.at("adds").get<std::vector<NodeId>>();
    kg.write = kj.at("write");
    g.kernels.push_back(std::move(kg));
  }
  return Result<Sdfg>::ok(std::move(g));
}

json schedule_json(const Schedule& s) {
  return json{{"ii", s.ii},
              {"time", s.time},
              {"cached", s.cached},
              {"multicast", s.multicast},
              {"bus", s.bus}};
}

Schedule schedule_from(const json& j, std::size_t nodes) {
  Schedule s;
  s.ii = j.value("ii", 1);
  s.resize(nodes);
  s.time = j.at("time").get<std::vector<int>>();
  s.cached = j.at("cached").get<std::vector<uint8_t>>();
  s.multicast = j.at("multicast").get<std::vector<uint8_t>>();
  s.bus = j.at("bus").get<std::vector<int>>();
  s.resize(nodes);  // pad if the file was truncated
  return s;
}

json mapping_json(const Mapping& m) {
  json bindings = json::array(), routes = json::array();
  for (const Binding& b : m.bindings) {
    bindings.push_back(json{{"node", b.node},
                            {"kind", b.kind == Binding::Kind::Read    ? "read"
                                     : b.kind == Binding::Kind::Write ? "write"
                                                                      : "op"},
                            {"layer", b.layer},
                            {"bus", b.bus},
                            {"row", b.row},
                            {"col", b.col},
                            {"drive_row", b.drive_row},
                            {"drive_col", b.drive_col}});
  }
  for (const auto& [edge, r] : m.routes)
    routes.push_back(json{
        {"src", edge.first}, {"dst", edge.second}, {"kind", route_name(r.kind)}, {"index", r.index}});
  return json{{"ii", m.ii},
              {"complete", m.complete},
              {"bindings", std::move(bindings)},
              {"routes", std::move(routes)}};
}

Result<Mapping> mapping_from(const json& j) {
  Mapping m;
  m.ii = j.value("ii", 1);
  m.complete = j.value("complete", false);
  for (const auto& bj : j.at("bindings")) {
    Binding b;
    b.node = bj.at("node");
    std::string k = bj.at("kind");
    b.kind = k == "read"    ? Binding::Kind::Read
             : k == "write" ? Binding::Kind::Write
                            : Binding::Kind::Op;
    b.layer = bj.at("layer");
    b.bus = bj.at("bus");
    b.row = bj.at("row");
    b.col = bj.at("col");
    b.drive_row = bj.at("drive_row");
    b.drive_col = bj.at("drive_col");
    m.bindings.push_back(b);
  }
  for (const auto& rj : j.at("routes")) {
    auto k = route_of(rj.at("kind"));
    if (!k) return Result<Mapping>::fail(k.error());
    m.routes[{rj.at("src"), rj.at("dst")}] = Route{k.value(), rj.at("index")};
  }
  return Result<Mapping>::ok(std::move(m));
}

json metrics_json(const Metrics& m) {
  return json{{"mii", m.mii},
              {"ii_first_attempt", m.ii_first_attempt},
              {"cops", m.cops},
              {"mcids", m.mcids},
              {"first_attempt_success", m.first_attempt_success},
              {"mapped", m.mapped},
              {"final_ii", m.final_ii},
              {"speedup", {{"num", m.speedup.num}, {"den", m.speedup.den}}}};
}

Metrics metrics_from(const json& j) {
  Metrics m;
  m.mii = j.value("mii", 0);
  m.ii_first_attempt = j.value("ii_first_attempt", 0);
  m.cops = j.value("cops", 0);
  m.mcids = j.value("mcids", 0);
  m.first_attempt_success = j.value("first_attempt_success", false);
  m.mapped = j.value("mapped", false);
  m.final_ii = j.value("final_ii", 0);
  if (j.contains("speedup"))
    m.speedup = Ratio{j["speedup"].value("num", 0LL), j["speedup"].value("den", 1LL)};
  return m;
}

}  // namespace

Result<std::string> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return Result<std::string>::fail("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return Result<std::string>::ok(ss.str());
}

Result<bool> write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) return Result<bool>::fail("cannot open " + path + " for writing");
  out << content;
  return out.good() ? Result<bool>::ok(true)
                    : Result<bool>::fail("short write to " + path);
}

std::string config_to_json(const CgraConfig& cfg) { return config_json(cfg).dump(2) + "\n"; }

Result<CgraConfig> config_from_json(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object())
    return Result<CgraConfig>::fail("config is not a JSON object");
  CgraConfig c = config_from(j);
  return c.valid() ? Result<CgraConfig>::ok(c)
                   : Result<CgraConfig>::fail("config values out of range");
}

std::string block_to_json(const SparseBlock& block) { return block_json(block).dump(2) + "\n"; }

Result<SparseBlock> block_from_json(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object())
    return Result<SparseBlock>::fail("block is not a JSON object");
  return block_from(j);
}

std::string artifact_to_json(const MappedArtifact& art) {
  json j{{"config", config_json(art.config)},
         {"block", block_json(art.block)},
         {"sdfg", sdfg_json(art.sdfg)},
         {"schedule", schedule_json(art.schedule)},
         {"mapping", mapping_json(art.mapping)},
         {"metrics", metrics_json(art.metrics)}};
  return j.dump(2) + "\n";
}

Result<MappedArtifact> artifact_from_json(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object())
    return Result<MappedArtifact>::fail("artifact is not a JSON object");
  MappedArtifact art;
  try {
    art.config = config_from(j.at("config"));
    auto b = block_from(j.at("block"));
    if (!b) return Result<MappedArtifact>::fail(b.error());
    art.block = std::move(b.value());
    auto g = sdfg_from(j.at("sdfg"));
    if (!g) return Result<MappedArtifact>::fail(g.error());
    art.sdfg = std::move(g.value());
    art.schedule = schedule_from(j.at("schedule"), art.sdfg.nodes.size());
    auto m = mapping_from(j.at("mapping"));
    if (!m) return Result<MappedArtifact>::fail(m.error());
    art.mapping = std::move(m.value());
    art.metrics = metrics_from(j.value("metrics", json::object()));
  } catch (const json::exception& e) {
    return Result<MappedArtifact>::fail(std::string("artifact field missing: ") + e.what());
  }
  return Result<MappedArtifact>::ok(std::move(art));
}

std::string violations_to_json(const std::vector<Violation>& violations) {
  json arr = json::array();
  for (const Violation& v : violations)
    arr.push_back(json{{"rule", v.rule}, {"detail", v.detail}});
  return json{{"violations", std::move(arr)}}.dump(2) + "\n";
}

std::string results_csv(const std::vector<ResultRow>& rows) {
  std::ostringstream out;
  out << "block,MII,II_0,C,M,success,II,S\n";
  for (const ResultRow& r : rows) {
    out << r.block << ',' << r.mii << ',' << r.ii0 << ',' << r.cops << ',' << r.mcids << ','
        << (r.success ? "yes" : "no") << ',';
    if (r.mapped)
      out << r.final_ii;
    else
      out << "Failed";
    out << ',' << (r.mapped ? r.speedup : std::string("-")) << '\n';
  }
  return out.str();
}

std::string features_table(const std::vector<SparseBlock>& blocks) {
  std::ostringstream out;
  out << "block,sparsity,shape,ops,reads,writes,wide_readings\n";
  for (const SparseBlock& b : blocks) {
    Result<Sdfg> g = build_sdfg(b);
    char sp[16];
    std::snprintf(sp, sizeof sp, "%.2f", b.sparsity());
    out << b.name << ',' << sp << ",C" << b.channels << 'K' << b.kernels << ',';
    if (g)
      out << g.value().op_count() << ',' << g.value().read_count() << ','
          << g.value().write_count();
    else
      out << "-,-,-";
    out << ',' << b.fanout_gt4_count() << '\n';
  }
  return out.str();
}

std::string sdfg_to_dot(const Sdfg& sdfg, const Schedule* sched) {
  std::ostringstream out;
  out << "digraph sdfg {\n  rankdir=TB;\n  node [shape=box, fontsize=10];\n";
  for (const Node& n : sdfg.nodes) {
    out << "  n" << n.id << " [label=\"" << to_string(n.kind) << ' ' << n.id;
    if (n.channel >= 0) out << "\\nc" << n.channel;
    if (n.kernel >= 0) out << "\\nk" << n.kernel;
    if (sched && sched->scheduled(n.id))
      out << "\\nt=" << sched->time[n.id] << " (m" << sched->modulo(n.id) << ")";
    out << "\"";
    switch (n.kind) {
      case NodeKind::InputRead: out << ", style=filled, fillcolor=lightblue"; break;
      case NodeKind::OutputWrite: out << ", style=filled, fillcolor=lightyellow"; break;
      case NodeKind::Cop: out << ", style=filled, fillcolor=lightpink"; break;
      default: break;
    }
    out << "];\n";
  }
  for (const Edge& e : sdfg.edges) {
    out << "  n" << e.src << " -> n" << e.dst;
    if (sched && sched->scheduled(e.src) && sched->scheduled(e.dst)) {
      int dist = sched->time[e.dst] - sched->time[e.src];
      if (e.kind == EdgeKind::Internal && dist > 1)
        out << " [color=red, label=\"" << dist << "\"]";
    }
    out << ";\n";
  }
  if (sched) {
    std::map<int, std::vector<NodeId>> by_time;
    for (const Node& n : sdfg.nodes)
      if (sched->scheduled(n.id)) by_time[sched->time[n.id]].push_back(n.id);
    for (const auto& [t, ids] : by_time) {
      out << "  { rank=same;";
      for (NodeId v : ids) out << " n" << v << ';';
      out << " }\n";
    }
  }
  out << "}\n";
  return out.str();
}

std::string placement_to_dot(const Sdfg& sdfg, const Schedule& sched, const Mapping& mapping,
                             const CgraConfig& cfg) {
  std::ostringstream out;
  out << "digraph placement {\n  node [shape=plaintext];\n";
  for (int layer = 0; layer < sched.ii; ++layer) {
    std::vector<std::vector<std::string>> grid(cfg.rows, std::vector<std::string>(cfg.cols));
    std::vector<std::string> ibus(cfg.cols), obus(cfg.rows);
    for (const Node& n : sdfg.nodes) {
      if (!sched.scheduled(n.id) || sched.modulo(n.id) != layer) continue;
      if (n.id >= int(mapping.bindings.size())) continue;
      const Binding& b = mapping.bindings[n.id];
      if (b.node != n.id) continue;
      std::string tag = to_string(n.kind) + std::to_string(n.id);
      if (n.kind == NodeKind::InputRead) {
        if (b.bus >= 0 && b.bus < cfg.cols) ibus[b.bus] += (ibus[b.bus].empty() ? "" : " ") + tag;
      } else if (n.kind == NodeKind::OutputWrite) {
        if (b.bus >= 0 && b.bus < cfg.rows) obus[b.bus] += (obus[b.bus].empty() ? "" : " ") + tag;
      } else if (b.row >= 0 && b.row < cfg.rows && b.col >= 0 && b.col < cfg.cols) {
        if (b.drive_row) tag += ">r";
        if (b.drive_col) tag += ">c";
        grid[b.row][b.col] = tag;
      }
    }
    out << "  layer" << layer << " [label=<<table border=\"1\" cellspacing=\"0\">\n";
    out << "    <tr><td></td>";
    for (int c = 0; c < cfg.cols; ++c)
      out << "<td>in" << c << ": " << (ibus[c].empty() ? "&nbsp;" : ibus[c]) << "</td>";
    out << "<td>m=" << layer << "</td></tr>\n";
    for (int r = 0; r < cfg.rows; ++r) {
      out << "    <tr><td>out" << r << ": " << (obus[r].empty() ? "&nbsp;" : obus[r]) << "</td>";
      for (int c = 0; c < cfg.cols; ++c)
        out << "<td>" << (grid[r][c].empty() ? "&nbsp;" : grid[r][c]) << "</td>";
      out << "<td></td></tr>\n";
    }
    out << "  </table>>];\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace sparsemap
