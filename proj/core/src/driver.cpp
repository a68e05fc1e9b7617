#include "sparsemap/driver.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

namespace sparsemap {

Ratio compute_speedup(const SparseBlock& block, int final_ii, const CgraConfig& cfg) {
  if (final_ii < 1) return Ratio{0, 1};
  auto dense = build_sdfg(dense_counterpart(block));
  if (!dense) return Ratio{0, 1};
  return Ratio::of(calculate_mii(dense.value(), cfg), final_ii);
}

namespace {

BlockOutcome run_one(const SparseBlock& block, const RunOptions& opts) {
  BlockOutcome out;
  out.block = block;
  out.row.block = block.name;
  auto g = build_sdfg(block);
  if (!g) {
    out.result.failure = g.error();
    return out;
  }
  out.result = map_with_retries(g.value(), opts.cfg, opts.sched, opts.binder);
  Metrics& m = out.result.metrics;
  if (out.result.success) m.speedup = compute_speedup(block, m.final_ii, opts.cfg);
  out.row = ResultRow{block.name,  m.mii,    m.ii_first_attempt,      m.cops, m.mcids,
                      m.first_attempt_success, m.mapped, m.final_ii, m.speedup.str()};
  return out;
}

}  // namespace

std::vector<BlockOutcome> map_blocks(const std::vector<SparseBlock>& blocks,
                                     const RunOptions& opts) {
  std::vector<BlockOutcome> out(blocks.size());
  unsigned workers = opts.threads > 0 ? unsigned(opts.threads)
                                      : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, unsigned(std::max<std::size_t>(blocks.size(), 1)));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= blocks.size()) return;
      out[i] = run_one(blocks[i], opts);
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  return out;
}

}  // namespace sparsemap
