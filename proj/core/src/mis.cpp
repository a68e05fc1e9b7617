#include "sparsemap/mis.hpp"

#include <algorithm>
#include <cassert>
#include <random>

namespace sparsemap {

namespace {

struct ExactSolver {
  int n;
  std::vector<uint64_t> nbr;  // closed neighborhoods not included; open sets
  uint64_t best_set = 0;
  int best = 0;

  void run(uint64_t avail, uint64_t cur, int size) {
    if (size + __builtin_popcountll(avail) <= best) return;  // bound
    if (!avail) {
      if (size > best) {
        best = size;
        best_set = cur;
      }
      return;
    }
    // branch on the highest-degree available vertex
    int pick = -1, deg = -1;
    uint64_t a = avail;
    while (a) {
      int v = __builtin_ctzll(a);
      a &= a - 1;
      int d = __builtin_popcountll(nbr[v] & avail);
      if (d > deg) {
        deg = d;
        pick = v;
      }
    }
    uint64_t bit = uint64_t(1) << pick;
    run(avail & ~bit & ~nbr[pick], cur | bit, size + 1);  // take it
    run(avail & ~bit, cur, size);                         // leave it
  }
};

}  // namespace

std::vector<int> solve_mis_exact(const BitMatrix& adj) {
  int n = adj.size();
  assert(n <= 64);
  ExactSolver s;
  s.n = n;
  s.nbr.assign(n, 0);
  for (int v = 0; v < n; ++v)
    adj.for_each_neighbor(v, [&](int u) { s.nbr[v] |= uint64_t(1) << u; });
  uint64_t all = n == 64 ? ~uint64_t(0) : ((uint64_t(1) << n) - 1);
  s.run(all, 0, 0);
  std::vector<int> out;
  for (int v = 0; v < n; ++v)
    if ((s.best_set >> v) & 1) out.push_back(v);
  return out;
}

std::vector<int> solve_mis_tabu(const BitMatrix& adj, const MisOptions& opts) {
  const int n = adj.size();
  if (n == 0) return {};
  std::mt19937_64 rng(opts.seed);

  std::vector<uint8_t> in_set(n, 0);
  std::vector<int> conf(n, 0);  // neighbors currently in the set
  std::vector<int> tabu(n, 0);
  int size = 0, best = 0, iter = 0;
  std::vector<uint8_t> best_set(n, 0);

  auto add = [&](int v) {
    in_set[v] = 1;
    ++size;
    adj.for_each_neighbor(v, [&](int u) { ++conf[u]; });
  };
  auto drop = [&](int v) {
    in_set[v] = 0;
    --size;
    adj.for_each_neighbor(v, [&](int u) { --conf[u]; });
  };

  std::vector<int> cand;
  cand.reserve(n);
  // Stagnation counts every iteration without a new best: plateau swaps, but
  // also greedy/kick cycles inside a dominating orbit (a small set whose
  // members cover all other vertices blocks the swap phase entirely, so the
  // restart must fire from the other branches too).
  int stagnation = 0;
  auto shake = [&] {
    stagnation = 0;
    for (int v = 0; v < n; ++v)
      if (in_set[v] && rng() % 2 == 0) drop(v);
    std::fill(tabu.begin(), tabu.end(), 0);
  };
  while (iter < opts.iterations) {
    ++iter;
    bool improved = false;
    // greedy phase: pull in everything currently conflict-free
    cand.clear();
    for (int v = 0; v < n; ++v)
      if (!in_set[v] && conf[v] == 0) cand.push_back(v);
    if (!cand.empty()) {
      int v = cand[rng() % cand.size()];
      add(v);
      if (size > best) {
        best = size;
        best_set = in_set;
        improved = true;
        stagnation = 0;
        if (opts.target >= 0 && best >= opts.target) break;
      }
    } else {
      // swap phase: vertex blocked by exactly one member
      cand.clear();
      for (int v = 0; v < n; ++v)
        if (!in_set[v] && conf[v] == 1 && tabu[v] < iter) cand.push_back(v);
      if (!cand.empty()) {
        int v = cand[rng() % cand.size()];
        int evict = -1;
        adj.for_each_neighbor(v, [&](int u) {
          if (in_set[u]) evict = u;
        });
        if (evict >= 0) {  // conf can disagree transiently; keep the set independent
          drop(evict);
          tabu[evict] = iter + opts.tabu_tenure + int(rng() % 4);
          add(v);
        }
      } else {
        // fully stuck (everything tabu or doubly blocked): random kick
        std::vector<int> members;
        for (int v = 0; v < n; ++v)
          if (in_set[v]) members.push_back(v);
        if (members.empty()) break;
        drop(members[rng() % members.size()]);
      }
    }
    if (!improved && ++stagnation > 2 * n + 200) shake();
  }

  std::vector<int> out;
  for (int v = 0; v < n; ++v)
    if (best_set[v]) out.push_back(v);
  return out;
}

std::vector<int> solve_mis(const BitMatrix& adj, const MisOptions& opts) {
  if (adj.size() <= opts.exact_threshold) return solve_mis_exact(adj);
  return solve_mis_tabu(adj, opts);
}

}  // namespace sparsemap
