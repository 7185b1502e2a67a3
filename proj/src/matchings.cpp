#include "dimerlab/matchings.hpp"

#include <bit>
#include <unordered_map>

namespace dimerlab {

MatchingVector count_matchings(const Graph& g) {
  if (g.n > 32) fail(ErrorCode::TooLarge, "class size exceeds 32");
  const int n = g.n;
  // rows as plain right-vertex masks, bit b = right vertex b
  std::vector<uint64_t> rows(n, 0);
  for (int a = 0; a < n; ++a)
    for (int b : g.adj[a]) rows[a] |= uint64_t(1) << b;

  const uint64_t full = (n == 32) ? 0xffffffffull : ((uint64_t(1) << n) - 1);
  std::vector<mpz_class> f(full + 1);
  f[0] = 1;
  for (int j = 0; j < n; ++j) {
    // descending masks: f[S ^ bit] still holds the previous layer
    for (uint64_t s = full; s != 0; --s) {
      uint64_t t = s & rows[j];
      while (t) {
        const uint64_t bit = t & (~t + 1);
        f[s] += f[s ^ bit];
        t ^= bit;
      }
    }
  }

  MatchingVector m;
  m.n = n;
  m.counts.assign(n + 1, 0);
  for (uint64_t s = 0; s <= full; ++s) m.counts[std::popcount(s)] += f[s];
  return m;
}

namespace {

void brute_force_rec(const std::vector<std::pair<int, int>>& edges, size_t idx,
                     uint64_t used_left, uint64_t used_right, int size,
                     std::vector<mpz_class>& counts) {
  if (idx == edges.size()) {
    counts[size] += 1;
    return;
  }
  brute_force_rec(edges, idx + 1, used_left, used_right, size, counts);
  const auto [a, b] = edges[idx];
  const uint64_t la = uint64_t(1) << a, rb = uint64_t(1) << b;
  if ((used_left & la) || (used_right & rb)) return;
  brute_force_rec(edges, idx + 1, used_left | la, used_right | rb, size + 1, counts);
}

}  // namespace

MatchingVector brute_force_matchings(const Graph& g) {
  if (g.edge_count() > 24) fail(ErrorCode::TooLarge, "edge count exceeds 24");
  std::vector<std::pair<int, int>> edges;
  edges.reserve(g.edge_count());
  for (int a = 0; a < g.n; ++a)
    for (int b : g.adj[a]) edges.emplace_back(a, b);

  MatchingVector m;
  m.n = g.n;
  m.counts.assign(g.n + 1, 0);
  brute_force_rec(edges, 0, 0, 0, 0, m.counts);
  return m;
}

mpz_class complete_graph_matchings(int v, int i) {
  if (v < 0 || i < 0 || 2 * i > v)
    fail(ErrorCode::OutOfRange, "need 0 <= 2i <= v");
  mpz_class num = 1;
  for (int t = 0; t < 2 * i; ++t) num *= v - t;  // v! / (v-2i)!
  mpz_class den;
  mpz_fac_ui(den.get_mpz_t(), i);
  den <<= i;
  mpz_class out;
  mpz_divexact(out.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  return out;
}

// --- deletion / contraction -----------------------------------------------

namespace {

using Poly = std::vector<mpz_class>;  // coefficient of z^i = i-matching count

// Packs away empty rows and unused columns so isomorphic remnants share
// one memo key.
std::vector<uint32_t> normalize_rows(const std::vector<uint32_t>& rows, int ncols, int* out_cols) {
  uint32_t used_cols = 0;
  for (uint32_t row : rows) used_cols |= row;
  std::vector<int> colmap(ncols, -1);
  int q = std::popcount(used_cols);
  int next = 0;
  for (int c = ncols - 1; c >= 0; --c)  // bit position c = column ncols-1-c
    if ((used_cols >> c) & 1u) colmap[c] = next++;
  std::vector<uint32_t> out;
  out.reserve(rows.size());
  for (uint32_t row : rows) {
    if (!row) continue;
    uint32_t packed = 0;
    uint32_t t = row;
    while (t) {
      const int c = std::countr_zero(t);
      packed |= 1u << (q - 1 - colmap[c]);
      t &= t - 1;
    }
    out.push_back(packed);
  }
  *out_cols = q;
  return out;
}

Poly poly_add(const Poly& a, const Poly& b) {
  Poly out(std::max(a.size(), b.size()), 0);
  for (size_t i = 0; i < a.size(); ++i) out[i] += a[i];
  for (size_t i = 0; i < b.size(); ++i) out[i] += b[i];
  return out;
}

Poly dc(const std::vector<uint32_t>& rows, int ncols,
        std::unordered_map<std::string, Poly>& memo) {
  if (rows.empty()) return Poly{1};
  const std::string key = biadjacency_key(rows, ncols);
  if (auto it = memo.find(key); it != memo.end()) return it->second;

  // edge = first one bit of the first row
  const uint32_t bit = uint32_t(1) << (31 - std::countl_zero(rows[0]));

  std::vector<uint32_t> del = rows;  // G - e
  del[0] ^= bit;
  int del_cols = 0;
  std::vector<uint32_t> del_n = normalize_rows(del, ncols, &del_cols);

  std::vector<uint32_t> con(rows.begin() + 1, rows.end());  // G - u - w
  for (auto& row : con) row &= ~bit;
  int con_cols = 0;
  std::vector<uint32_t> con_n = normalize_rows(con, ncols, &con_cols);

  Poly a = dc(del_n, del_cols, memo);
  Poly b = dc(con_n, con_cols, memo);
  b.insert(b.begin(), 0);  // times z
  Poly out = poly_add(a, b);
  memo.emplace(std::move(key), out);
  return out;
}

}  // namespace

MatchingVector deletion_contraction_matchings(const Graph& g) {
  if (g.vertex_count() > 24) fail(ErrorCode::TooLarge, "vertex count exceeds 24");
  std::unordered_map<std::string, Poly> memo;
  int ncols = 0;
  std::vector<uint32_t> rows = normalize_rows(g.row_masks(), g.n, &ncols);
  Poly p = dc(rows, ncols, memo);
  MatchingVector m;
  m.n = g.n;
  m.counts.assign(g.n + 1, 0);
  for (size_t i = 0; i < p.size(); ++i) m.counts[i] = p[i];
  return m;
}

}  // namespace dimerlab
