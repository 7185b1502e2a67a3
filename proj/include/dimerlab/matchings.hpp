#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

#include "dimerlab/error.hpp"
#include "dimerlab/graph.hpp"

namespace dimerlab {

// Exact i-matching counts m_0..m_n of a bipartite graph with n vertices
// per class. m_0 = 1 always; for an r-regular input m_1 = r*n and m_n >= 1.
struct MatchingVector {
  int n = 0;
  std::vector<mpz_class> counts;

  const mpz_class& operator[](int i) const {
    if (i < 0 || i > n) fail(ErrorCode::IndexOutOfRange, "matching index " + std::to_string(i));
    return counts[i];
  }
};

// Subset dynamic program over left vertices, state = set of matched right
// vertices. Time O(n * 2^n * r), memory one layer of 2^n big integers.
MatchingVector count_matchings(const Graph& g);

// Independent oracle: enumerates subsets of the edge set and counts the
// pairwise disjoint ones by size. Edge count limited to 24.
MatchingVector brute_force_matchings(const Graph& g);

// Second independent engine: matching polynomial edge recursion
// M(G) = M(G - e) + z * M(G - u - w), memoized on canonical subgraph keys.
// Limited to v <= 24.
MatchingVector deletion_contraction_matchings(const Graph& g);

// Number of i-matchings of the complete graph on v vertices:
// v! / ((v - 2i)! * i! * 2^i).
mpz_class complete_graph_matchings(int v, int i);

}  // namespace dimerlab
