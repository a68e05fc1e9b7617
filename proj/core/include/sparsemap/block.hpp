#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sparsemap/sdfg.hpp"
#include "sparsemap/util.hpp"

namespace sparsemap {

/**
 * Pruned convolution block: boolean mask over channels x kernels telling
 * which weights survived pruning. Every kernel (column) and every channel
 * (row) must keep at least one weight.
 */
struct SparseBlock {
  std::string name;
  int channels = 0;  // n
  int kernels = 0;   // m
  std::vector<std::vector<uint8_t>> mask;  // channels x kernels, 0/1
  uint64_t seed = 0;
  int resamples = 0;

  int nnz() const;
  double sparsity() const;  // zero fraction
  int row_fanout(int channel) const;
  int col_weight(int kernel) const;
  // Readings whose fan-out exceeds one input bus's PE fan-out on a 4-row
  // array; reported in the features table.
  int fanout_gt4_count() const;
  bool valid(std::string* why = nullptr) const;
};

// Bernoulli mask with per-entry zero probability; any all-zero kernel column
// or channel row is redrawn (bounded, counted in `resamples`).
Result<SparseBlock> generate_block(int n, int m, double zero_probability, uint64_t seed,
                                   std::string name = "");

// Exact-population variant used for fixtures: places `nnz` ones uniformly at
// random subject to every row and column staying nonempty.
Result<SparseBlock> generate_block_with_nnz(int n, int m, int nnz, uint64_t seed,
                                            std::string name = "");

/**
 * Lower a block to its dataflow graph: one input reading per channel, one
 * multiplication per surviving weight, a balanced adder tree per kernel
 * (left-to-right over channel order) and one output writing per kernel.
 * A kernel with k muls gets exactly k-1 additions.
 */
Result<Sdfg> build_sdfg(const SparseBlock& block);

// assoc[a][b] = number of kernels multiplying both channel a and channel b.
// The diagonal is each channel's fan-out.
struct AssociationMatrix {
  std::vector<std::vector<int>> a;
  int size() const { return int(a.size()); }
  int at(int x, int y) const { return a[x][y]; }
};

AssociationMatrix association_matrix(const Sdfg& sdfg);

// Same geometry with every weight kept; baseline for speedup.
SparseBlock dense_counterpart(const SparseBlock& block);

}  // namespace sparsemap
