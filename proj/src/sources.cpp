#include "dimerlab/sources.hpp"

#include <algorithm>
#include <bit>
#include <fstream>
#include <limits>
#include <random>

#include "dimerlab/error.hpp"

namespace dimerlab {

namespace {

void check_shape(const SourceSpec& spec) {
  if (spec.v < 2 || spec.v % 2 != 0)
    fail(ErrorCode::InvalidArgument, "vertex count must be even and positive");
  if (spec.r < 1 || spec.r > spec.v / 2)
    fail(ErrorCode::InvalidArgument, "degree must satisfy 1 <= r <= v/2");
}

uint64_t fnv64(const std::string& s) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::vector<uint32_t> transpose(const std::vector<uint32_t>& rows, int n) {
  std::vector<uint32_t> out(n, 0);
  for (int j = 0; j < n; ++j)
    for (int c = 0; c < n; ++c)
      if ((rows[j] >> (n - 1 - c)) & 1u) out[c] |= 1u << (n - 1 - j);
  return out;
}

Graph graph_from_rows(const std::vector<uint32_t>& rows, int n) {
  std::vector<std::vector<int>> adj(n);
  for (int a = 0; a < n; ++a)
    for (int c = 0; c < n; ++c)
      if ((rows[a] >> (n - 1 - c)) & 1u) adj[a].push_back(c);
  return validate(std::move(adj));
}

// Orderly generation of canonical n x n 0/1 matrices with all row and
// column sums r. Rows are built in non-increasing numeric order and every
// prefix must itself be canonical, which visits each canonical matrix
// exactly once. Class swap is deduplicated against the transpose at the end.
class Enumerator {
 public:
  Enumerator(int n, int r, bool connected_only, const GraphVisitor& visit)
      : n_(n), r_(r), connected_only_(connected_only), visit_(visit) {
    for (uint32_t mask = (1u << n_) - 1; mask != 0; --mask)
      if (std::popcount(mask) == r_) masks_.push_back(mask);
    colcnt_.assign(n_, 0);
  }

  void run() {
    const uint32_t first = ((1u << r_) - 1) << (n_ - r_);
    push(first);
    extend(1);
    pop(first);
  }

 private:
  void push(uint32_t mask) {
    rows_.push_back(mask);
    for (int c = 0; c < n_; ++c) colcnt_[c] += (mask >> (n_ - 1 - c)) & 1u;
  }

  void pop(uint32_t mask) {
    rows_.pop_back();
    for (int c = 0; c < n_; ++c) colcnt_[c] -= (mask >> (n_ - 1 - c)) & 1u;
  }

  void extend(int filled) {
    if (stopped_) return;
    if (filled == n_) {
      finish();
      return;
    }
    const int left = n_ - filled;
    uint32_t need = 0, forbid = 0;
    for (int c = 0; c < n_; ++c) {
      const int deficit = r_ - colcnt_[c];
      if (deficit > left) return;  // a column can gain at most one per row
      if (deficit == left) need |= 1u << (n_ - 1 - c);
      if (deficit == 0) forbid |= 1u << (n_ - 1 - c);
    }
    const uint32_t prev = rows_.back();
    for (uint32_t mask : masks_) {
      if (mask > prev) continue;
      if ((mask & forbid) || (need & ~mask)) continue;
      push(mask);
      if (matrix_is_canonical(rows_, n_)) extend(filled + 1);
      pop(mask);
      if (stopped_) return;
    }
  }

  void finish() {
    const std::vector<uint32_t> flipped = canonical_matrix(transpose(rows_, n_), n_);
    if (rows_ < flipped) return;  // the transpose's class representative wins
    Graph g = graph_from_rows(rows_, n_);
    if (connected_only_ && !is_connected(g)) return;
    if (!visit_(g)) stopped_ = true;
  }

  const int n_, r_;
  const bool connected_only_;
  const GraphVisitor& visit_;
  std::vector<uint32_t> masks_;
  std::vector<uint32_t> rows_;
  std::vector<int> colcnt_;
  bool stopped_ = false;
};

uint64_t uniform_below(std::mt19937_64& rng, uint64_t bound) {
  const uint64_t max = std::numeric_limits<uint64_t>::max();
  const uint64_t limit = max - max % bound;
  uint64_t x = rng();
  while (x >= limit) x = rng();
  return x % bound;
}

Graph sample_one(std::mt19937_64& rng, int n, int r) {
  const int e = n * r;
  std::vector<int> owner(e);
  std::vector<char> has(static_cast<size_t>(n) * n);
  std::vector<std::pair<int, int>> edges(e);

  for (bool simple = false; !simple;) {
    for (int t = 0; t < e; ++t) owner[t] = t / r;
    for (int t = e - 1; t > 0; --t)
      std::swap(owner[t], owner[uniform_below(rng, t + 1)]);
    std::fill(has.begin(), has.end(), 0);
    simple = true;
    for (int t = 0; t < e && simple; ++t) {
      const int a = t / r, b = owner[t];
      char& cell = has[static_cast<size_t>(a) * n + b];
      if (cell) simple = false;
      cell = 1;
      edges[t] = {a, b};
    }
  }

  const long long swaps = 10ll * r * n;
  for (long long t = 0; t < swaps; ++t) {
    const int i = static_cast<int>(uniform_below(rng, e));
    const int j = static_cast<int>(uniform_below(rng, e));
    const auto [a1, b1] = edges[i];
    const auto [a2, b2] = edges[j];
    if (a1 == a2 || b1 == b2) continue;
    if (has[static_cast<size_t>(a1) * n + b2] || has[static_cast<size_t>(a2) * n + b1]) continue;
    has[static_cast<size_t>(a1) * n + b1] = 0;
    has[static_cast<size_t>(a2) * n + b2] = 0;
    has[static_cast<size_t>(a1) * n + b2] = 1;
    has[static_cast<size_t>(a2) * n + b1] = 1;
    edges[i] = {a1, b2};
    edges[j] = {a2, b1};
  }

  std::vector<std::vector<int>> adj(n);
  for (const auto& [a, b] : edges) adj[a].push_back(b);
  return validate(std::move(adj));
}

}  // namespace

uint64_t spec_fingerprint(const SourceSpec& spec) {
  std::string s;
  switch (spec.kind) {
    case SourceKind::Enumerate:
      s = "enumerate:r=" + std::to_string(spec.r) + ":v=" + std::to_string(spec.v) +
          ":connected=" + (spec.connected_only ? "1" : "0");
      break;
    case SourceKind::Sample:
      s = "sample:r=" + std::to_string(spec.r) + ":v=" + std::to_string(spec.v) +
          ":count=" + std::to_string(spec.count) + ":seed=" + std::to_string(spec.seed);
      break;
    case SourceKind::File:
      s = "file:" + spec.path;
      break;
  }
  return fnv64(s);
}

void enumerate_graphs(const SourceSpec& spec, const GraphVisitor& visit) {
  check_shape(spec);
  const int limit = spec.r <= 2 ? 32 : (spec.r == 3 ? 16 : 22);
  if (spec.v > limit)
    fail(ErrorCode::Infeasible, "enumeration at r=" + std::to_string(spec.r) +
                                    " is limited to v <= " + std::to_string(limit));
  Enumerator e(spec.v / 2, spec.r, spec.connected_only, visit);
  e.run();
}

void sample_graphs(const SourceSpec& spec, const GraphVisitor& visit) {
  check_shape(spec);
  if (spec.count < 1) fail(ErrorCode::InvalidArgument, "sample count must be >= 1");
  std::mt19937_64 rng(spec.seed);
  for (long long idx = 0; idx < spec.count; ++idx) {
    Graph g = sample_one(rng, spec.v / 2, spec.r);
    g.label = "sample-" + std::to_string(idx);
    if (!visit(g)) return;
  }
}

void ingest_graphs(const SourceSpec& spec, const GraphVisitor& visit) {
  std::ifstream in(spec.path);
  if (!in) fail(ErrorCode::IoError, "cannot open " + spec.path);
  std::string line;
  for (long long lineno = 1; std::getline(in, line); ++lineno) {
    Graph g = [&] {
      try {
        return parse_graph6(line);
      } catch (const Error& e) {
        fail(e.code(), "line " + std::to_string(lineno) + ": " + e.what());
      }
    }();
    if (!visit(g)) return;
  }
  if (in.bad()) fail(ErrorCode::IoError, "read error on " + spec.path);
}

void for_each_graph(const SourceSpec& spec, const GraphVisitor& visit) {
  switch (spec.kind) {
    case SourceKind::Enumerate:
      enumerate_graphs(spec, visit);
      return;
    case SourceKind::Sample:
      sample_graphs(spec, visit);
      return;
    case SourceKind::File:
      ingest_graphs(spec, visit);
      return;
  }
  fail(ErrorCode::InvalidArgument, "unknown source kind");
}

}  // namespace dimerlab
