#include "sparsemap/sdfg.hpp"

#include <cassert>
#include <queue>

namespace sparsemap {

NodeId Sdfg::add_node(NodeKind kind, int kernel, int channel) {
  Node n;
  n.id = NodeId(nodes.size());
  n.kind = kind;
  n.kernel = kernel;
  n.channel = channel;
  nodes.push_back(n);
  return n.id;
}

EdgeKind Sdfg::classify(NodeKind src, NodeKind dst) {
  assert(src != NodeKind::OutputWrite && dst != NodeKind::InputRead);
  if (src == NodeKind::InputRead) return EdgeKind::Read;
  if (dst == NodeKind::OutputWrite) return EdgeKind::Write;
  return EdgeKind::Internal;
}

void Sdfg::add_edge(NodeId src, NodeId dst) {
  assert(src >= 0 && src < NodeId(nodes.size()));
  assert(dst >= 0 && dst < NodeId(nodes.size()));
  edges.push_back({src, dst, classify(nodes[src].kind, nodes[dst].kind)});
}

std::vector<NodeId> Sdfg::consumers(NodeId v) const {
  std::vector<NodeId> out;
  for (const Edge& e : edges)
    if (e.src == v) out.push_back(e.dst);
  return out;
}

std::vector<NodeId> Sdfg::producers(NodeId v) const {
  std::vector<NodeId> out;
  for (const Edge& e : edges)
    if (e.dst == v) out.push_back(e.src);
  return out;
}

NodeId Sdfg::single_producer(NodeId v) const {
  NodeId p = kNoNode;
  for (const Edge& e : edges)
    if (e.dst == v) {
      assert(p == kNoNode);
      p = e.src;
    }
  return p;
}

int Sdfg::count(NodeKind k) const {
  int c = 0;
  for (const Node& n : nodes)
    if (n.kind == k) ++c;
  return c;
}

bool Sdfg::is_acyclic() const {
  std::vector<int> indeg(nodes.size(), 0);
  for (const Edge& e : edges) ++indeg[e.dst];
  std::queue<NodeId> q;
  for (const Node& n : nodes)
    if (indeg[n.id] == 0) q.push(n.id);
  std::size_t seen = 0;
  std::vector<std::vector<NodeId>> adj(nodes.size());
  for (const Edge& e : edges) adj[e.src].push_back(e.dst);
  while (!q.empty()) {
    NodeId v = q.front();
    q.pop();
    ++seen;
    for (NodeId w : adj[v])
      if (--indeg[w] == 0) q.push(w);
  }
  return seen == nodes.size();
}

NodeId Sdfg::kernel_root(const KernelGroup& kg) const {
  if (kg.write == kNoNode) return kNoNode;
  NodeId p = single_producer(kg.write);
  // An output Cop forwards the real root.
  while (p != kNoNode && nodes[p].kind == NodeKind::Cop) p = single_producer(p);
  return p;
}

std::string to_string(NodeKind k) {
  switch (k) {
    case NodeKind::Mul: return "mul";
    case NodeKind::Add: return "add";
    case NodeKind::InputRead: return "read";
    case NodeKind::OutputWrite: return "write";
    case NodeKind::Cop: return "cop";
  }
  return "?";
}

std::string to_string(EdgeKind k) {
  switch (k) {
    case EdgeKind::Read: return "read";
    case EdgeKind::Write: return "write";
    case EdgeKind::Internal: return "internal";
  }
  return "?";
}

}  // namespace sparsemap
