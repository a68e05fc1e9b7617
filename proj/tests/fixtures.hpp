#pragma once

#include <algorithm>
#include <map>
#include <vector>

#include "sparsemap/block.hpp"
#include "sparsemap/schedule.hpp"
#include "sparsemap/sdfg.hpp"

namespace fixtures {

using namespace sparsemap;

inline SparseBlock make_block(std::string name, std::vector<std::vector<uint8_t>> mask) {
  SparseBlock b;
  b.name = std::move(name);
  b.channels = int(mask.size());
  b.kernels = int(mask.front().size());
  b.mask = std::move(mask);
  return b;
}

// 2 channels x 5 kernels. Channel 0 feeds every kernel, so its reading fans
// out to 5 muls, one past a bus column on the 4-row array. The smallest block
// that exercises multicast, the caching fallback and a full binding.
inline SparseBlock fanout5_block() {
  return make_block("fanout5", {{1, 1, 1, 1, 1}, {0, 0, 0, 0, 1}});
}

// 4 channels x 6 kernels, 16 surviving weights (26 ops, 4 readings,
// 6 writings). Known behaviour: the sparse scheduler closes at II=2 with no
// caching ops and two multi-cycle dependencies; the baseline needs II=3.
inline SparseBlock four_six_block() {
  return make_block("four_six", {{1, 1, 0, 1, 1, 1},
                                 {0, 1, 1, 1, 0, 1},
                                 {1, 0, 1, 1, 0, 0},
                                 {1, 1, 1, 0, 1, 0}});
}

// Single kernel over k channels, one mul per channel.
inline Sdfg kernel_graph(int k) {
  SparseBlock b;
  b.name = "k";
  b.channels = k;
  b.kernels = 1;
  b.mask.assign(k, std::vector<uint8_t>(1, 1));
  return build_sdfg(b).value();
}

// Hand schedule for adder-tree experiments: reading i and its mul both run at
// times[i]; occupancy tables kept consistent so the tree passes can place.
inline Schedule times_schedule(const Sdfg& g, const std::vector<int>& times, int ii) {
  Schedule s;
  s.ii = ii;
  s.t_pe.assign(ii, 0);
  s.t_in.assign(ii, 0);
  s.t_out.assign(ii, 0);
  s.resize(g.nodes.size());
  int i = 0;
  for (const Node& n : g.nodes)
    if (n.kind == NodeKind::InputRead) {
      s.time[n.id] = times[i];
      s.bus[n.id] = 0;
      ++s.t_in[times[i] % ii];
      for (NodeId c : g.consumers(n.id)) {
        s.time[c] = times[i];
        ++s.t_pe[times[i] % ii];
      }
      ++i;
    }
  return s;
}

// Multi-cycle dependency count with every write re-timed one past its root.
inline int mcids_of(const Sdfg& g, Schedule s) {
  for (const KernelGroup& kg : g.kernels)
    s.time[kg.write] = s.time[g.kernel_root(kg)] + 1;
  auto r = mcid_set(g, s);
  auto edges = r.value();
  return int(edges.size());
}

// Minimum MCID count over every binary reduction tree of the given leaf
// times, each combine placed ASAP. Delaying a combine past ASAP was checked
// exhaustively not to help for k <= 6, so shapes are the whole search space.
class MinTreeMcids {
 public:
  int solve(std::vector<int> times) {
    std::sort(times.begin(), times.end());
    return go(times);
  }

 private:
  std::map<std::vector<int>, int> memo_;

  int go(const std::vector<int>& s) {
    if (s.size() <= 1) return 0;
    auto it = memo_.find(s);
    if (it != memo_.end()) return it->second;
    int best = 1 << 30;
    for (std::size_t i = 0; i < s.size(); ++i)
      for (std::size_t j = i + 1; j < s.size(); ++j) {
        int t = std::max(s[i], s[j]) + 1;
        int cost = (t - s[i] > 1) + (t - s[j] > 1);
        std::vector<int> rest;
        rest.reserve(s.size() - 1);
        for (std::size_t q = 0; q < s.size(); ++q)
          if (q != i && q != j) rest.push_back(s[q]);
        rest.insert(std::lower_bound(rest.begin(), rest.end(), t), t);
        best = std::min(best, cost + go(rest));
      }
    memo_[s] = best;
    return best;
  }
};

}  // namespace fixtures
