#include "sparsemap/block.hpp"

#include <algorithm>
#include <random>

namespace sparsemap {

int SparseBlock::nnz() const {
  int c = 0;
  for (const auto& row : mask)
    for (uint8_t v : row) c += v != 0;
  return c;
}

double SparseBlock::sparsity() const {
  int total = channels * kernels;
  return total == 0 ? 0.0 : 1.0 - double(nnz()) / total;
}

int SparseBlock::row_fanout(int channel) const {
  int c = 0;
  for (uint8_t v : mask[channel]) c += v != 0;
  return c;
}

int SparseBlock::col_weight(int kernel) const {
  int c = 0;
  for (const auto& row : mask) c += row[kernel] != 0;
  return c;
}

int SparseBlock::fanout_gt4_count() const {
  int c = 0;
  for (int i = 0; i < channels; ++i) c += row_fanout(i) > 4;
  return c;
}

bool SparseBlock::valid(std::string* why) const {
  auto bad = [&](std::string msg) {
    if (why) *why = std::move(msg);
    return false;
  };
  if (channels < 1 || kernels < 1) return bad("block needs at least one channel and kernel");
  if (int(mask.size()) != channels) return bad("mask row count != channels");
  for (const auto& row : mask)
    if (int(row.size()) != kernels) return bad("mask column count != kernels");
  for (int i = 0; i < channels; ++i)
    if (row_fanout(i) == 0) return bad("channel " + std::to_string(i) + " has no weights");
  for (int k = 0; k < kernels; ++k)
    if (col_weight(k) == 0) return bad("kernel " + std::to_string(k) + " has no weights");
  return true;
}

Result<SparseBlock> generate_block(int n, int m, double zero_probability, uint64_t seed,
                                   std::string name) {
  if (n < 1 || m < 1) return Result<SparseBlock>::fail("need n >= 1 and m >= 1");
  if (zero_probability < 0.0 || zero_probability >= 1.0)
    return Result<SparseBlock>::fail("zero probability must be in [0, 1)");

  SparseBlock b;
  b.name = name.empty() ? "block" : std::move(name);
  b.channels = n;
  b.kernels = m;
  b.seed = seed;
  b.mask.assign(n, std::vector<uint8_t>(m, 0));

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto draw = [&] { return u(rng) >= zero_probability ? uint8_t(1) : uint8_t(0); };

  for (int i = 0; i < n; ++i)
    for (int k = 0; k < m; ++k) b.mask[i][k] = draw();

  // Redraw empty rows/columns until the block is well formed. A redraw can
  // re-empty the other dimension, hence the joint loop.
  const int kMaxResamples = 10000;
  while (true) {
    bool dirty = false;
    for (int i = 0; i < n && !dirty; ++i) dirty = b.row_fanout(i) == 0;
    for (int k = 0; k < m && !dirty; ++k) dirty = b.col_weight(k) == 0;
    if (!dirty) break;
    if (b.resamples >= kMaxResamples)
      return Result<SparseBlock>::fail("resample budget exhausted; zero probability too high");
    ++b.resamples;
    for (int i = 0; i < n; ++i)
      if (b.row_fanout(i) == 0)
        for (int k = 0; k < m; ++k) b.mask[i][k] = draw();
    for (int k = 0; k < m; ++k)
      if (b.col_weight(k) == 0)
        for (int i = 0; i < n; ++i) b.mask[i][k] = draw();
  }
  return Result<SparseBlock>::ok(std::move(b));
}

Result<SparseBlock> generate_block_with_nnz(int n, int m, int nnz, uint64_t seed,
                                            std::string name) {
  if (n < 1 || m < 1) return Result<SparseBlock>::fail("need n >= 1 and m >= 1");
  if (nnz < std::max(n, m) || nnz > n * m)
    return Result<SparseBlock>::fail("nnz outside [max(n,m), n*m]");

  SparseBlock b;
  b.name = name.empty() ? "block" : std::move(name);
  b.channels = n;
  b.kernels = m;
  b.seed = seed;
  b.mask.assign(n, std::vector<uint8_t>(m, 0));

  std::mt19937_64 rng(seed);
  // Cover every row and column first, then sprinkle the remainder.
  std::vector<int> rows(n), cols(m);
  for (int i = 0; i < n; ++i) rows[i] = i;
  for (int k = 0; k < m; ++k) cols[k] = k;
  std::shuffle(rows.begin(), rows.end(), rng);
  std::shuffle(cols.begin(), cols.end(), rng);
  int placed = 0;
  for (int i = 0; i < std::max(n, m); ++i) {
    int r = rows[i % n];
    int c = cols[i % m];
    if (!b.mask[r][c]) {
      b.mask[r][c] = 1;
      ++placed;
    }
  }
  std::vector<std::pair<int, int>> free_cells;
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < m; ++k)
      if (!b.mask[i][k]) free_cells.emplace_back(i, k);
  std::shuffle(free_cells.begin(), free_cells.end(), rng);
  for (std::size_t j = 0; j < free_cells.size() && placed < nnz; ++j) {
    b.mask[free_cells[j].first][free_cells[j].second] = 1;
    ++placed;
  }
  if (placed != nnz) return Result<SparseBlock>::fail("could not hit requested nnz");
  return Result<SparseBlock>::ok(std::move(b));
}

Result<Sdfg> build_sdfg(const SparseBlock& block) {
  std::string why;
  if (!block.valid(&why)) return Result<Sdfg>::fail("bad block: " + why);

  Sdfg g;
  std::vector<NodeId> reading(block.channels);
  for (int c = 0; c < block.channels; ++c)
    reading[c] = g.add_node(NodeKind::InputRead, -1, c);

  g.kernels.resize(block.kernels);
  for (int k = 0; k < block.kernels; ++k) {
    KernelGroup& kg = g.kernels[k];
    kg.kernel = k;
    for (int c = 0; c < block.channels; ++c) {
      if (!block.mask[c][k]) continue;
      NodeId mul = g.add_node(NodeKind::Mul, k, c);
      g.add_edge(reading[c], mul);
      kg.muls.push_back(mul);
    }
    // Balanced reduction, pairing left to right over channel order.
    std::vector<NodeId> level = kg.muls;
    while (level.size() > 1) {
      std::vector<NodeId> next;
      for (std::size_t i = 0; i + 1 < level.size(); i += 2) {
        NodeId add = g.add_node(NodeKind::Add, k);
        g.add_edge(level[i], add);
        g.add_edge(level[i + 1], add);
        kg.adds.push_back(add);
        next.push_back(add);
      }
      if (level.size() % 2) next.push_back(level.back());
      level = std::move(next);
    }
    kg.write = g.add_node(NodeKind::OutputWrite, k);
    g.add_edge(level.front(), kg.write);
  }

  // k muls -> k-1 adds per kernel, so |V_OP| = 2*nnz - kernels.
  if (g.op_count() != 2 * block.nnz() - block.kernels)
    return Result<Sdfg>::fail("internal: op count invariant broken");
  return Result<Sdfg>::ok(std::move(g));
}

AssociationMatrix association_matrix(const Sdfg& sdfg) {
  int channels = 0;
  for (const Node& n : sdfg.nodes)
    if (n.kind == NodeKind::InputRead) channels = std::max(channels, n.channel + 1);

  // kernel -> channel incidence from the muls
  std::vector<std::vector<uint8_t>> inc;
  for (const Node& n : sdfg.nodes) {
    if (n.kind != NodeKind::Mul) continue;
    if (n.kernel >= int(inc.size())) inc.resize(n.kernel + 1);
    auto& row = inc[n.kernel];
    if (n.channel >= int(row.size())) row.resize(channels, 0);
    row[n.channel] = 1;
  }

  AssociationMatrix am;
  am.a.assign(channels, std::vector<int>(channels, 0));
  for (const auto& row : inc) {
    for (int x = 0; x < int(row.size()); ++x) {
      if (!row[x]) continue;
      for (int y = 0; y < int(row.size()); ++y)
        if (row[y]) ++am.a[x][y];
    }
  }
  return am;
}

SparseBlock dense_counterpart(const SparseBlock& block) {
  SparseBlock d = block;
  d.name = block.name + "_dense";
  for (auto& row : d.mask) std::fill(row.begin(), row.end(), uint8_t(1));
  d.resamples = 0;
  return d;
}

}  // namespace sparsemap
