#include "dimerlab/graph.hpp"

#include <algorithm>
#include <bit>
#include <deque>

namespace dimerlab {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotRegular: return "NotRegular";
    case ErrorCode::NotSimple: return "NotSimple";
    case ErrorCode::ClassSizeMismatch: return "ClassSizeMismatch";
    case ErrorCode::MalformedGraph6: return "MalformedGraph6";
    case ErrorCode::NotBipartite: return "NotBipartite";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::Infeasible: return "Infeasible";
    case ErrorCode::Unstable: return "Unstable";
    case ErrorCode::InconsistentLeadingTerm: return "InconsistentLeadingTerm";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::InsufficientData: return "InsufficientData";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Error";
}

std::vector<uint32_t> Graph::row_masks() const {
  if (n > 32) fail(ErrorCode::TooLarge, "class size exceeds 32");
  std::vector<uint32_t> rows(n, 0);
  for (int a = 0; a < n; ++a)
    for (int b : adj[a]) rows[a] |= 1u << (n - 1 - b);
  return rows;
}

Graph validate(std::vector<std::vector<int>> adjacency, std::string label) {
  const int n = static_cast<int>(adjacency.size());
  if (n == 0) fail(ErrorCode::ClassSizeMismatch, "empty vertex class");
  const int r = static_cast<int>(adjacency[0].size());
  if (r < 1) fail(ErrorCode::NotRegular, "left vertex of degree 0");
  std::vector<int> right_degree(n, 0);
  for (auto& nbrs : adjacency) {
    if (static_cast<int>(nbrs.size()) != r)
      fail(ErrorCode::NotRegular, "left degrees differ");
    std::sort(nbrs.begin(), nbrs.end());
    for (size_t t = 0; t < nbrs.size(); ++t) {
      const int b = nbrs[t];
      if (b < 0 || b >= n)
        fail(ErrorCode::ClassSizeMismatch, "right index outside class of size " + std::to_string(n));
      if (t > 0 && nbrs[t - 1] == b) fail(ErrorCode::NotSimple, "duplicate edge");
      right_degree[b]++;
    }
  }
  for (int b = 0; b < n; ++b)
    if (right_degree[b] != r)
      fail(ErrorCode::NotRegular, "right vertex " + std::to_string(b) + " has degree " +
                                      std::to_string(right_degree[b]) + ", expected " + std::to_string(r));
  Graph g;
  g.n = n;
  g.r = r;
  g.adj = std::move(adjacency);
  g.label = std::move(label);
  return g;
}

// --- graph6 ---------------------------------------------------------------

namespace {

constexpr int kG6Bias = 63;

void append_g6_size(std::string& out, long v) {
  if (v < 63) {
    out.push_back(static_cast<char>(v + kG6Bias));
  } else if (v <= 258047) {
    out.push_back(126);
    out.push_back(static_cast<char>(((v >> 12) & 63) + kG6Bias));
    out.push_back(static_cast<char>(((v >> 6) & 63) + kG6Bias));
    out.push_back(static_cast<char>((v & 63) + kG6Bias));
  } else {
    out.push_back(126);
    out.push_back(126);
    for (int shift = 30; shift >= 0; shift -= 6)
      out.push_back(static_cast<char>(((v >> shift) & 63) + kG6Bias));
  }
}

int g6_digit(std::string_view line, size_t pos) {
  const int d = static_cast<unsigned char>(line[pos]) - kG6Bias;
  if (d < 0 || d > 63) fail(ErrorCode::MalformedGraph6, "byte outside graph6 range");
  return d;
}

}  // namespace

Graph parse_graph6(std::string_view line) {
  while (!line.empty() && (line.back() == '\n' || line.back() == '\r' ||
                           line.back() == ' ' || line.back() == '\t'))
    line.remove_suffix(1);
  constexpr std::string_view header = ">>graph6<<";
  if (line.substr(0, header.size()) == header) line.remove_prefix(header.size());
  if (line.empty()) fail(ErrorCode::MalformedGraph6, "empty line");

  size_t pos = 0;
  long v = 0;
  if (static_cast<unsigned char>(line[0]) == 126) {
    if (line.size() >= 2 && static_cast<unsigned char>(line[1]) == 126) {
      if (line.size() < 8) fail(ErrorCode::MalformedGraph6, "truncated size header");
      for (int t = 0; t < 6; ++t) v = (v << 6) | g6_digit(line, 2 + t);
      pos = 8;
    } else {
      if (line.size() < 4) fail(ErrorCode::MalformedGraph6, "truncated size header");
      for (int t = 0; t < 3; ++t) v = (v << 6) | g6_digit(line, 1 + t);
      pos = 4;
    }
  } else {
    v = g6_digit(line, 0);
    if (v > 62) fail(ErrorCode::MalformedGraph6, "bad size byte");
    pos = 1;
  }
  if (v > 4096) fail(ErrorCode::TooLarge, "graph6 vertex count " + std::to_string(v));

  const long nbits = v * (v - 1) / 2;
  const size_t nbytes = static_cast<size_t>((nbits + 5) / 6);
  if (line.size() - pos != nbytes)
    fail(ErrorCode::MalformedGraph6, "adjacency payload length mismatch");

  std::vector<std::vector<int>> nbr(v);
  {
    int acc = 0, bits = 0;
    size_t q = pos;
    for (long j = 1; j < v; ++j) {
      for (long i = 0; i < j; ++i) {
        if (bits == 0) {
          acc = g6_digit(line, q++);
          bits = 6;
        }
        if ((acc >> (bits - 1)) & 1) {
          nbr[i].push_back(static_cast<int>(j));
          nbr[j].push_back(static_cast<int>(i));
        }
        --bits;
      }
    }
  }

  // 2-color each component.
  std::vector<int> color(v, -1), comp(v, -1);
  std::vector<std::pair<int, int>> comp_sizes;
  for (int s = 0; s < v; ++s) {
    if (color[s] >= 0) continue;
    const int ci = static_cast<int>(comp_sizes.size());
    comp_sizes.emplace_back(0, 0);
    std::deque<int> queue{s};
    color[s] = 0;
    comp[s] = ci;
    while (!queue.empty()) {
      const int u = queue.front();
      queue.pop_front();
      (color[u] == 0 ? comp_sizes[ci].first : comp_sizes[ci].second)++;
      for (int w : nbr[u]) {
        if (color[w] < 0) {
          color[w] = 1 - color[u];
          comp[w] = ci;
          queue.push_back(w);
        } else if (color[w] == color[u]) {
          fail(ErrorCode::NotBipartite, "odd cycle");
        }
      }
    }
  }

  // Flip component colorings so both classes end up with v/2 vertices.
  const int ncomp = static_cast<int>(comp_sizes.size());
  const long target = v / 2;
  if (v % 2 != 0) fail(ErrorCode::ClassSizeMismatch, "odd vertex count");
  std::vector<std::vector<char>> reach(ncomp + 1, std::vector<char>(target + 1, 0));
  reach[0][0] = 1;
  for (int i = 0; i < ncomp; ++i) {
    const int a = comp_sizes[i].first, b = comp_sizes[i].second;
    for (long s = 0; s <= target; ++s) {
      if (!reach[i][s]) continue;
      if (s + a <= target) reach[i + 1][s + a] = 1;
      if (s + b <= target) reach[i + 1][s + b] = 1;
    }
  }
  if (!reach[ncomp][target])
    fail(ErrorCode::ClassSizeMismatch, "bipartition classes cannot be balanced");
  std::vector<int> flip(ncomp);
  {
    long s = target;
    for (int i = ncomp - 1; i >= 0; --i) {
      const int a = comp_sizes[i].first, b = comp_sizes[i].second;
      if (s - a >= 0 && reach[i][s - a]) {
        flip[i] = 0;
        s -= a;
      } else {
        flip[i] = 1;
        s -= b;
      }
    }
  }

  std::vector<int> side(v), idx(v, -1);
  for (int u = 0; u < v; ++u) side[u] = color[u] ^ flip[comp[u]];
  int li = 0, ri = 0;
  for (int u = 0; u < v; ++u) idx[u] = (side[u] == 0) ? li++ : ri++;

  std::vector<std::vector<int>> adjacency(v / 2);
  for (int u = 0; u < v; ++u) {
    if (side[u] != 0) continue;
    for (int w : nbr[u]) adjacency[idx[u]].push_back(idx[w]);
  }
  return validate(std::move(adjacency), std::string(line));
}

std::string emit_graph6(const Graph& g) {
  const int v = 2 * g.n;
  std::string out;
  append_g6_size(out, v);
  std::vector<std::vector<char>> has(g.n, std::vector<char>(g.n, 0));
  for (int a = 0; a < g.n; ++a)
    for (int b : g.adj[a]) has[a][b] = 1;
  int acc = 0, bits = 0;
  for (int j = 1; j < v; ++j) {
    for (int i = 0; i < j; ++i) {
      const int bit = (i < g.n && j >= g.n) ? has[i][j - g.n] : 0;
      acc = (acc << 1) | bit;
      if (++bits == 6) {
        out.push_back(static_cast<char>(acc + kG6Bias));
        acc = 0;
        bits = 0;
      }
    }
  }
  if (bits > 0) out.push_back(static_cast<char>((acc << (6 - bits)) + kG6Bias));
  return out;
}

bool is_connected(const Graph& g) {
  const int v = 2 * g.n;
  if (v == 0) return true;
  std::vector<char> seen(v, 0);
  std::deque<int> queue{0};
  seen[0] = 1;
  int visited = 1;
  std::vector<std::vector<int>> radj(g.n);
  for (int a = 0; a < g.n; ++a)
    for (int b : g.adj[a]) radj[b].push_back(a);
  while (!queue.empty()) {
    const int u = queue.front();
    queue.pop_front();
    if (u < g.n) {
      for (int b : g.adj[u])
        if (!seen[g.n + b]) seen[g.n + b] = 1, ++visited, queue.push_back(g.n + b);
    } else {
      for (int a : radj[u - g.n])
        if (!seen[a]) seen[a] = 1, ++visited, queue.push_back(a);
    }
  }
  return visited == v;
}

// --- canonization ---------------------------------------------------------

namespace {

std::vector<uint32_t> transpose_matrix(const std::vector<uint32_t>& rows, int ncols) {
  const int m = static_cast<int>(rows.size());
  std::vector<uint32_t> out(ncols, 0);
  for (int j = 0; j < m; ++j)
    for (int c = 0; c < ncols; ++c)
      if ((rows[j] >> (ncols - 1 - c)) & 1u) out[c] |= 1u << (m - 1 - j);
  return out;
}

// Backtracking search over (row order, column order) with an ordered
// column partition. Cells occupy contiguous canonical positions; a row
// mapped into position places its ones first within every cell, which is
// the unique per-cell maximum, so a row's achievable value is determined
// by its per-cell intersection counts.
class Canonizer {
 public:
  Canonizer(const std::vector<uint32_t>& rows, int ncols)
      : rows_(rows), m_(static_cast<int>(rows.size())), n_(ncols) {
    if (ncols > 32) fail(ErrorCode::TooLarge, "more than 32 columns");
    cells_.resize(m_ + 1);
    for (auto& c : cells_) c.reserve(n_);
  }

  std::vector<uint32_t> canonical() {
    best_.clear();
    target_ = nullptr;
    not_canonical_ = false;
    cells_[0].clear();
    if (n_ > 0) cells_[0].push_back(n_ == 32 ? ~0u : ((1u << n_) - 1));
    dfs(0, 0);
    return best_;
  }

  bool is_canonical() {
    best_.clear();
    target_ = &rows_;
    not_canonical_ = false;
    cells_[0].clear();
    if (n_ > 0) cells_[0].push_back(n_ == 32 ? ~0u : ((1u << n_) - 1));
    dfs(0, 0);
    return !not_canonical_;
  }

 private:
  uint32_t value_of(uint32_t row, const std::vector<uint32_t>& cells) const {
    uint32_t val = 0;
    int pos = 0;
    for (uint32_t cell : cells) {
      const int size = std::popcount(cell);
      const int k = std::popcount(row & cell);
      val |= static_cast<uint32_t>(((uint64_t(1) << k) - 1) << (n_ - pos - k));
      pos += size;
    }
    return val;
  }

  void refine(const std::vector<uint32_t>& cells, uint32_t row, std::vector<uint32_t>& out) const {
    out.clear();
    for (uint32_t cell : cells) {
      const uint32_t in = cell & row, rest = cell & ~row;
      if (in) out.push_back(in);
      if (rest) out.push_back(rest);
    }
  }

  void dfs(int depth, uint32_t used) {
    if (not_canonical_ || depth == m_) return;
    const auto& cells = cells_[depth];

    uint32_t vmax = 0;
    for (int j = 0; j < m_; ++j) {
      if (used & (1u << j)) continue;
      const uint32_t val = value_of(rows_[j], cells);
      if (val > vmax) vmax = val;
    }

    if (target_) {
      if (vmax > (*target_)[depth]) {
        not_canonical_ = true;
        return;
      }
      if (vmax < (*target_)[depth]) return;  // cannot match the target here
    } else {
      if (static_cast<int>(best_.size()) == depth) {
        best_.push_back(vmax);
      } else if (vmax > best_[depth]) {
        best_[depth] = vmax;
        best_.resize(depth + 1);
      } else if (vmax < best_[depth]) {
        return;
      }
    }

    uint32_t unused[32], sorted_unused[32];
    int nunused = 0;
    for (int j = 0; j < m_; ++j)
      if (!(used & (1u << j))) unused[nunused++] = rows_[j];
    std::copy(unused, unused + nunused, sorted_unused);
    std::sort(sorted_unused, sorted_unused + nunused);

    uint32_t seen[32];
    int nseen = 0;
    for (int j = 0; j < m_; ++j) {
      if (used & (1u << j)) continue;
      if (value_of(rows_[j], cells) != vmax) continue;
      bool dup = false;
      for (int t = 0; t < nseen && !dup; ++t)
        dup = seen[t] == rows_[j] ||
              swap_equivalent(seen[t], rows_[j], cells, unused, sorted_unused, nunused);
      if (dup) continue;
      seen[nseen++] = rows_[j];
      refine(cells, rows_[j], cells_[depth + 1]);
      dfs(depth + 1, used | (1u << j));
      if (not_canonical_) return;
    }
  }

  // Two tied candidate rows are interchangeable when the column involution
  // pairing their differing bits cell by cell maps the unused row multiset
  // to itself. It preserves every cell, so both branches yield identical
  // value sequences and one of them can be skipped.
  static bool swap_equivalent(uint32_t a, uint32_t b, const std::vector<uint32_t>& cells,
                              const uint32_t* unused, const uint32_t* sorted_unused,
                              int nunused) {
    int from[32], to[32];
    int npairs = 0;
    for (uint32_t cell : cells) {
      uint32_t da = a & ~b & cell, db = b & ~a & cell;
      while (da) {
        const int x = 31 - std::countl_zero(da);
        const int y = 31 - std::countl_zero(db);
        da ^= 1u << x;
        db ^= 1u << y;
        from[npairs] = x;
        to[npairs] = y;
        ++npairs;
      }
    }
    uint32_t support = 0;
    for (int t = 0; t < npairs; ++t) support |= (1u << from[t]) | (1u << to[t]);

    uint32_t mapped[32];
    for (int u = 0; u < nunused; ++u) {
      const uint32_t row = unused[u];
      uint32_t img = row & ~support;
      if (row & support) {
        for (int t = 0; t < npairs; ++t) {
          if ((row >> from[t]) & 1u) img |= 1u << to[t];
          if ((row >> to[t]) & 1u) img |= 1u << from[t];
        }
      } else {
        img = row;
      }
      mapped[u] = img;
    }
    std::sort(mapped, mapped + nunused);
    return std::equal(mapped, mapped + nunused, sorted_unused);
  }

  const std::vector<uint32_t>& rows_;
  const int m_, n_;
  std::vector<std::vector<uint32_t>> cells_;
  std::vector<uint32_t> best_;
  const std::vector<uint32_t>* target_ = nullptr;
  bool not_canonical_ = false;
};

void append_u16(std::string& out, int x) {
  out.push_back(static_cast<char>((x >> 8) & 0xff));
  out.push_back(static_cast<char>(x & 0xff));
}

void append_u32(std::string& out, uint32_t x) {
  for (int shift = 24; shift >= 0; shift -= 8)
    out.push_back(static_cast<char>((x >> shift) & 0xff));
}

}  // namespace

std::vector<uint32_t> canonical_matrix(const std::vector<uint32_t>& rows, int ncols) {
  if (rows.empty()) return {};
  if (rows.size() > 32) fail(ErrorCode::TooLarge, "more than 32 rows");
  Canonizer c(rows, ncols);
  return c.canonical();
}

bool matrix_is_canonical(const std::vector<uint32_t>& rows, int ncols) {
  if (rows.empty()) return true;
  if (rows.size() > 32) fail(ErrorCode::TooLarge, "more than 32 rows");
  Canonizer c(rows, ncols);
  return c.is_canonical();
}

std::string biadjacency_key(const std::vector<uint32_t>& rows, int ncols) {
  int p = static_cast<int>(rows.size()), q = ncols;
  std::vector<uint32_t> oriented = rows;
  if (p > q) {
    oriented = transpose_matrix(rows, ncols);
    std::swap(p, q);
  }
  std::vector<uint32_t> canon = canonical_matrix(oriented, q);
  if (p == q) {
    std::vector<uint32_t> canon_t = canonical_matrix(transpose_matrix(oriented, q), q);
    if (canon_t > canon) canon = std::move(canon_t);
  }
  std::string key;
  key.reserve(4 + 4 * canon.size());
  append_u16(key, p);
  append_u16(key, q);
  for (uint32_t row : canon) append_u32(key, row);
  return key;
}

CanonicalForm canonical_form(const Graph& g) {
  std::string bytes;
  bytes.reserve(8 + 4 * g.n);
  append_u16(bytes, g.n);
  append_u16(bytes, g.r);
  bytes += biadjacency_key(g.row_masks(), g.n);
  return CanonicalForm{std::move(bytes)};
}

}  // namespace dimerlab
