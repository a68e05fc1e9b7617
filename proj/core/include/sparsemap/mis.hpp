#pragma once

#include <cstdint>
#include <vector>

#include "sparsemap/bitmatrix.hpp"

namespace sparsemap {

struct MisOptions {
  int exact_threshold = 30;  // graphs up to this order are solved exactly
  int iterations = 200000;   // tabu move budget
  int tabu_tenure = 7;
  uint64_t seed = 1;
  int target = -1;  // stop as soon as a set of this size is found
};

// Exact maximum independent set by branch and bound (graphs up to 64
// vertices; intended for the small end and for checking the heuristic).
std::vector<int> solve_mis_exact(const BitMatrix& adj);

/**
 * Tabu local search: grow greedily while any conflict-free vertex remains,
 * otherwise swap in a once-blocked vertex and tabu the evicted one;
 * stagnation triggers a partial random restart. Deterministic per seed.
 */
std::vector<int> solve_mis_tabu(const BitMatrix& adj, const MisOptions& opts);

// Dispatch: exact up to exact_threshold, tabu beyond.
std::vector<int> solve_mis(const BitMatrix& adj, const MisOptions& opts);

}  // namespace sparsemap
