#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "dimerlab/error.hpp"

namespace dimerlab {

// r-regular bipartite graph with two vertex classes of n vertices each.
// adj[a] is the sorted list of right neighbors of left vertex a; indices
// are 0-based in both classes. In whole-graph labelings (graph6, reports)
// the left class occupies vertices 0..n-1 and the right class n..2n-1.
struct Graph {
  int n = 0;
  int r = 0;
  std::vector<std::vector<int>> adj;
  std::string label;

  int vertex_count() const { return 2 * n; }
  int edge_count() const { return n * r; }

  // Left rows as column bitmasks, column c at bit (n-1-c) so that the
  // numeric order of masks equals lexicographic order of matrix rows.
  std::vector<uint32_t> row_masks() const;
};

// Checks the r-regular bipartite invariants and returns the graph.
// Throws NotRegular, NotSimple or ClassSizeMismatch.
Graph validate(std::vector<std::vector<int>> adjacency, std::string label = "");

// Decodes one graph6 line (optional ">>graph6<<" header tolerated).
// The bipartition is recovered by 2-coloring; for disconnected graphs the
// per-component colorings are flipped so that the classes balance.
Graph parse_graph6(std::string_view line);

// Encodes with left vertices 0..n-1, right n..2n-1. No trailing newline.
std::string emit_graph6(const Graph& g);

bool is_connected(const Graph& g);

// Total-order key; two graphs compare equal iff they are isomorphic as
// bipartite graphs, class swap allowed. Exact, not a hash.
struct CanonicalForm {
  std::string bytes;
  auto operator<=>(const CanonicalForm&) const = default;
};

CanonicalForm canonical_form(const Graph& g);

// --- biadjacency matrix canonization -------------------------------------
//
// Rows are bitmasks over ncols columns with column c at bit (ncols-1-c).
// The canonical representative is the lexicographically largest matrix
// reachable by independent row and column permutations, found by ordered
// partition refinement over columns with backtracking over row choices.

std::vector<uint32_t> canonical_matrix(const std::vector<uint32_t>& rows, int ncols);

// True iff rows are already the canonical representative. Cheaper than
// canonical_matrix when the answer is usually yes (orderly generation).
bool matrix_is_canonical(const std::vector<uint32_t>& rows, int ncols);

// Canonical key for an arbitrary 0/1 matrix up to row/column permutation
// and transposition. Used for isomorphism-keyed memo tables.
std::string biadjacency_key(const std::vector<uint32_t>& rows, int ncols);

}  // namespace dimerlab
