#pragma once

#include <string>
#include <vector>

namespace sparsemap {

using NodeId = int;
constexpr NodeId kNoNode = -1;

// Cop is a caching pass-through occupying one PE slot: it latches a datum at
// its own time t and exposes it at t+1. The scheduler inserts Cops when input
// data outlives its bus cycle or when an output bus is busy.
enum class NodeKind { Mul, Add, InputRead, OutputWrite, Cop };

// Read edges pin the consumer to the producer's cycle (unbuffered bus),
// Write edges pin it to exactly one cycle later, Internal edges only order.
enum class EdgeKind { Read, Write, Internal };

struct Node {
  NodeId id = kNoNode;
  NodeKind kind = NodeKind::Mul;
  int kernel = -1;   // Mul/Add/OutputWrite and output Cops
  int channel = -1;  // InputRead (and clones), Mul, input Cops
};

struct Edge {
  NodeId src = kNoNode;
  NodeId dst = kNoNode;
  EdgeKind kind = EdgeKind::Internal;
  bool operator==(const Edge& o) const { return src == o.src && dst == o.dst; }
};

// One convolution kernel's slice of the graph: its multiplications, the
// accumulation additions (rebuilt by the scheduler when tree reconstruction
// is on) and the single output writing.
struct KernelGroup {
  int kernel = -1;
  std::vector<NodeId> muls;
  std::vector<NodeId> adds;
  NodeId write = kNoNode;
};

struct Sdfg {
  std::vector<Node> nodes;  // node id == index
  std::vector<Edge> edges;
  std::vector<KernelGroup> kernels;

  NodeId add_node(NodeKind kind, int kernel = -1, int channel = -1);
  void add_edge(NodeId src, NodeId dst);
  static EdgeKind classify(NodeKind src, NodeKind dst);

  std::vector<NodeId> consumers(NodeId v) const;
  std::vector<NodeId> producers(NodeId v) const;
  // Producer of an output writing / single consumer of a tree node.
  NodeId single_producer(NodeId v) const;

  int count(NodeKind k) const;
  int op_count() const { return count(NodeKind::Mul) + count(NodeKind::Add); }
  int read_count() const { return count(NodeKind::InputRead); }
  int write_count() const { return count(NodeKind::OutputWrite); }
  int cop_count() const { return count(NodeKind::Cop); }

  bool is_acyclic() const;
  // Root of a kernel's accumulation: the node feeding its output writing
  // (ignoring output Cops appended after tree construction).
  NodeId kernel_root(const KernelGroup& kg) const;
};

std::string to_string(NodeKind k);
std::string to_string(EdgeKind k);

}  // namespace sparsemap
