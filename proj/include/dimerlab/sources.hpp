#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "dimerlab/graph.hpp"

namespace dimerlab {

enum class SourceKind { Enumerate, Sample, File };

// Description of a graph stream. Streams are deterministic: the same spec
// (including seed) always yields the same sequence of graphs.
struct SourceSpec {
  SourceKind kind = SourceKind::Enumerate;
  int r = 3;
  int v = 6;
  bool connected_only = true;
  long long count = 1;  // sample size
  uint64_t seed = 0;    // sample RNG seed
  std::string path;     // graph6 file for SourceKind::File
};

// Stable 64-bit fingerprint of a spec, used to match checkpoints to runs.
uint64_t spec_fingerprint(const SourceSpec& spec);

using GraphVisitor = std::function<bool(const Graph&)>;  // return false to stop

// Exhaustive, isomorphism-free enumeration (class swap counts as isomorphic)
// in a fixed deterministic order. Feasible sizes: r <= 2 up to v = 32,
// r = 3 up to v = 16, r >= 4 up to v = 22 (hours at the top end).
void enumerate_graphs(const SourceSpec& spec, const GraphVisitor& visit);

// Approximately uniform r-regular bipartite graphs: configuration-model
// pairing with rejection of parallel edges, then 10*r*n two-edge swaps.
void sample_graphs(const SourceSpec& spec, const GraphVisitor& visit);

// Graphs from a graph6 file, one per line; parse failures carry the line number.
void ingest_graphs(const SourceSpec& spec, const GraphVisitor& visit);

void for_each_graph(const SourceSpec& spec, const GraphVisitor& visit);

}  // namespace dimerlab
