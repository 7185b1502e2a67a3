#include "doctest.h"

#include "dimerlab/graph.hpp"

#include <algorithm>
#include <random>

using namespace dimerlab;

namespace {

Graph complete_bipartite(int n) {
  std::vector<std::vector<int>> adj(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) adj[a].push_back(b);
  return validate(std::move(adj));
}

Graph cycle(int len) {
  // C_len with vertices alternating between classes; len must be even.
  const int n = len / 2;
  std::vector<std::vector<int>> adj(n);
  for (int a = 0; a < n; ++a) {
    adj[a].push_back(a);
    adj[a].push_back((a + n - 1) % n);
  }
  return validate(std::move(adj));
}

}  // namespace

TEST_CASE("validate accepts regular bipartite adjacency") {
  const Graph k33 = complete_bipartite(3);
  CHECK(k33.n == 3);
  CHECK(k33.r == 3);
  CHECK(k33.vertex_count() == 6);
  CHECK(k33.edge_count() == 9);

  const Graph c6 = cycle(6);
  CHECK(c6.n == 3);
  CHECK(c6.r == 2);
  CHECK(c6.edge_count() == 6);
}

TEST_CASE("validate rejects malformed adjacency") {
  CHECK_THROWS_AS(validate({{0, 1}, {0}}), Error);
  CHECK_THROWS_WITH_AS(validate({{0, 0}, {0, 1}}), doctest::Contains("duplicate"), Error);
  CHECK_THROWS_AS(validate({{0, 2}, {0, 1}}), Error);
  CHECK_THROWS_AS(validate({}), Error);

  try {
    validate({{0, 1}, {0}});
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotRegular);
  }
  try {
    validate({{0, 0}, {0, 1}});
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotSimple);
  }
  try {
    validate({{0, 2}, {0, 1}});
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ClassSizeMismatch);
  }
}

TEST_CASE("graph6 parsing of a labeled 4-cycle") {
  const Graph g = parse_graph6("Cr");
  CHECK(g.n == 2);
  CHECK(g.r == 2);
  CHECK(g.edge_count() == 4);
  CHECK(is_connected(g));
  CHECK(g.label == "Cr");

  // Another labeling of the same cycle.
  const Graph h = parse_graph6("C]");
  CHECK(canonical_form(g) == canonical_form(h));
}

TEST_CASE("graph6 parsing errors") {
  auto code_of = [](const char* s) {
    try {
      parse_graph6(s);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::InvalidArgument;
  };
  CHECK(code_of("Bw") == ErrorCode::NotBipartite);   // triangle
  CHECK(code_of("Bg") == ErrorCode::ClassSizeMismatch);  // 3-vertex path
  CHECK(code_of("C") == ErrorCode::MalformedGraph6);  // truncated payload
  CHECK(code_of("") == ErrorCode::MalformedGraph6);
  CHECK(code_of("Crr") == ErrorCode::MalformedGraph6);  // trailing junk
  CHECK(code_of("C]") == ErrorCode::InvalidArgument);  // parses fine
  CHECK(code_of("Ds_") == ErrorCode::ClassSizeMismatch);  // odd-order star
  CHECK(code_of("A?") == ErrorCode::NotRegular);  // two isolated vertices
}

TEST_CASE("graph6 header prefix and whitespace are tolerated") {
  const Graph g = parse_graph6(">>graph6<<Cr\n");
  CHECK(g.n == 2);
  CHECK(canonical_form(g) == canonical_form(parse_graph6("Cr")));
}

TEST_CASE("graph6 round trip preserves the graph") {
  for (const Graph& g : {complete_bipartite(3), complete_bipartite(4), cycle(8), cycle(12)}) {
    const std::string line = emit_graph6(g);
    CHECK(line.find('\n') == std::string::npos);
    const Graph back = parse_graph6(line);
    CHECK(back.n == g.n);
    CHECK(back.r == g.r);
    CHECK(canonical_form(back) == canonical_form(g));
  }
}

TEST_CASE("graph6 round trip beyond the one-byte size header") {
  // Perfect matching on 64 vertices forces the three-byte order encoding.
  std::vector<std::vector<int>> adj(32);
  for (int a = 0; a < 32; ++a) adj[a] = {a};
  const Graph g = validate(std::move(adj));
  const Graph back = parse_graph6(emit_graph6(g));
  CHECK(back.n == 32);
  CHECK(back.r == 1);
  CHECK(canonical_form(back) == canonical_form(g));
}

TEST_CASE("canonical form is invariant under relabeling") {
  std::mt19937 rng(12345);
  const Graph base = cycle(10);
  const auto base_form = canonical_form(base);
  for (int trial = 0; trial < 25; ++trial) {
    std::vector<int> lperm(base.n), rperm(base.n);
    for (int a = 0; a < base.n; ++a) lperm[a] = a, rperm[a] = a;
    std::shuffle(lperm.begin(), lperm.end(), rng);
    std::shuffle(rperm.begin(), rperm.end(), rng);
    std::vector<std::vector<int>> adj(base.n);
    for (int a = 0; a < base.n; ++a)
      for (int b : base.adj[a]) adj[lperm[a]].push_back(rperm[b]);
    CHECK(canonical_form(validate(std::move(adj))) == base_form);
  }
}

TEST_CASE("canonical form separates non-isomorphic graphs") {
  CHECK(canonical_form(cycle(12)) != canonical_form(complete_bipartite(6)));
  // C_12 vs two disjoint hexagons: same degrees and order.
  std::vector<std::vector<int>> adj(6);
  for (int a = 0; a < 3; ++a) {
    adj[a] = {a, (a + 2) % 3};
    adj[a + 3] = {3 + a, 3 + (a + 2) % 3};
  }
  const Graph two_hexagons = validate(std::move(adj));
  CHECK_FALSE(is_connected(two_hexagons));
  CHECK(canonical_form(cycle(12)) != canonical_form(two_hexagons));
}

TEST_CASE("canonical matrix is a fixed point") {
  std::mt19937 rng(99);
  for (int trial = 0; trial < 40; ++trial) {
    const int nrows = 1 + int(rng() % 6);
    const int ncols = 1 + int(rng() % 6);
    std::vector<uint32_t> rows(nrows);
    for (auto& row : rows) row = rng() & ((uint32_t(1) << ncols) - 1);
    const auto canon = canonical_matrix(rows, ncols);
    CHECK(matrix_is_canonical(canon, ncols));
    CHECK(canonical_matrix(canon, ncols) == canon);
    // Canonical form dominates the input seen as a number vector.
    auto sorted_input = rows;
    std::sort(sorted_input.begin(), sorted_input.end(), std::greater<>());
    CHECK(canon >= sorted_input);
  }
}

TEST_CASE("connectivity detection") {
  CHECK(is_connected(complete_bipartite(2)));
  CHECK(is_connected(cycle(6)));
  std::vector<std::vector<int>> adj(2);
  adj[0] = {0};
  adj[1] = {1};
  CHECK_FALSE(is_connected(validate(std::move(adj))));
}
