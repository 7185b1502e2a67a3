#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dimerlab/positivity.hpp"
#include "dimerlab/sources.hpp"

namespace dimerlab {

struct SweepOptions {
  SourceSpec source;
  PositivityTest test = PositivityTest::GraphPositivity;
  KRange convention = KRange::FromZero;
  int threads = 0;                // 0: DIMERLAB_THREADS, then hardware count
  bool violators_only = false;
  bool ordered = true;            // sequence-ordered output (default)
  std::string output_path;        // empty: tallies only; "-": stdout
  std::string checkpoint_path;    // empty: no checkpointing
  std::uint64_t abort_after = 0;  // testing hook: stop after N written records
};

struct SweepRecord {
  std::uint64_t sequence = 0;
  std::string graph6;
  int v = 0;
  int r = 0;
  PositivityTest test = PositivityTest::GraphPositivity;
  KRange convention = KRange::FromZero;
  std::vector<std::pair<int, int>> violations;  // (k, i)
  std::int64_t elapsed_us = 0;
};

std::string to_jsonl(const SweepRecord& rec);
SweepRecord sweep_record_from_json(const std::string& line);

// Tallies cover exactly the contiguous completed prefix of the stream, so a
// resumed run reproduces the uninterrupted totals.
struct Checkpoint {
  std::uint64_t fingerprint = 0;
  std::uint64_t last_sequence = 0;
  std::uint64_t total = 0;
  std::uint64_t violators = 0;
};

std::optional<Checkpoint> load_checkpoint(const std::string& path);
void store_checkpoint(const std::string& path, const Checkpoint& ck);  // tmp + rename

struct SweepSummary {
  std::uint64_t total = 0;
  std::uint64_t violators = 0;
  std::uint64_t last_sequence = 0;
  bool aborted = false;
};

// Producer / worker-pool / single-writer sweep over a graph source.
SweepSummary run_sweep(const SweepOptions& options);

struct SampleStats {
  std::uint64_t count = 0;
  std::uint64_t satisfied = 0;
  double fraction = 0.0;
  double ci_low = 0.0;  // Wilson 95% interval
  double ci_high = 0.0;
};

SampleStats sample_positivity_stats(const SourceSpec& source, PositivityTest test,
                                    KRange convention, int threads = 0);

int resolve_thread_count(int requested);

}  // namespace dimerlab
