#pragma once

#include <cstddef>
#include <string>

namespace sparsemap {

/**
 * Streaming CGRA parameters. The array is rows x cols PEs; one input bus per
 * column (its fan-out is the column's PEs) and one output bus per row. The
 * same physical column/row buses also carry PE-to-PE traffic, so binding has
 * to arbitrate I/O against internal routing. I/O buses are unbuffered.
 */
struct CgraConfig {
  int rows = 4;  // N
  int cols = 4;  // M
  int lrf_capacity = 8;
  int grf_capacity = 8;
  int grf_write_ports = 1;  // per modulo cycle, via the crossbar
  int grf_read_ports = 1;

  int input_buses() const { return cols; }
  int output_buses() const { return rows; }
  int pe_count() const { return rows * cols; }

  bool valid(std::string* why = nullptr) const;
};

/**
 * Time-extended CGRA: every physical resource replicated once per modulo
 * layer, each replica wired to its own replica in layer (m+1) % ii. Detailed
 * reachability (who can read which bus) is enforced by the conflict-graph
 * rules; this type fixes the resource name space shared by binder, validator
 * and the DOT export.
 */
struct Tec {
  enum class Resource { Pe, RowBus, ColBus, GrfWritePort, GrfReadPort };
  struct NodeRef {
    Resource kind;
    int layer;
    int a;  // Pe: row, RowBus: row, ColBus: col, ports: port index
    int b;  // Pe: col, otherwise unused (-1)
  };

  CgraConfig cfg;
  int ii = 1;

  static Tec build(const CgraConfig& cfg, int ii);

  int nodes_per_layer() const {
    return cfg.pe_count() + cfg.rows + cfg.cols + cfg.grf_write_ports + cfg.grf_read_ports;
  }
  std::size_t node_count() const { return std::size_t(nodes_per_layer()) * ii; }
  // One wrap edge per resource per layer.
  std::size_t edge_count() const { return std::size_t(nodes_per_layer()) * ii; }
  NodeRef successor(const NodeRef& n) const {
    NodeRef s = n;
    s.layer = (n.layer + 1) % ii;
    return s;
  }
};

}  // namespace sparsemap
