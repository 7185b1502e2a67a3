#include "dimerlab/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <cstdio>
#include <cstdlib>
#include <deque>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <thread>

#include "json.hpp"

namespace dimerlab {

namespace {

using nlohmann::ordered_json;

template <typename T>
class BoundedQueue {
 public:
  explicit BoundedQueue(std::size_t cap) : cap_(cap) {}

  bool push(T item) {
    std::unique_lock lk(m_);
    space_.wait(lk, [&] { return q_.size() < cap_ || closed_; });
    if (closed_) return false;
    q_.push_back(std::move(item));
    item_.notify_one();
    return true;
  }

  std::optional<T> pop() {
    std::unique_lock lk(m_);
    item_.wait(lk, [&] { return !q_.empty() || closed_; });
    if (q_.empty()) return std::nullopt;
    T out = std::move(q_.front());
    q_.pop_front();
    space_.notify_one();
    return out;
  }

  void close() {
    std::lock_guard lk(m_);
    closed_ = true;
    item_.notify_all();
    space_.notify_all();
  }

 private:
  std::mutex m_;
  std::condition_variable item_, space_;
  std::deque<T> q_;
  std::size_t cap_;
  bool closed_ = false;
};

int convention_k_min(KRange convention) { return convention == KRange::FromTwo ? 2 : 0; }

}  // namespace

std::string to_jsonl(const SweepRecord& rec) {
  ordered_json j;
  j["seq"] = rec.sequence;
  j["graph6"] = rec.graph6;
  j["v"] = rec.v;
  j["r"] = rec.r;
  j["test"] = positivity_test_name(rec.test);
  j["k_min"] = convention_k_min(rec.convention);
  auto viol = ordered_json::array();
  for (const auto& [k, i] : rec.violations) viol.push_back({k, i});
  j["violations"] = std::move(viol);
  j["elapsed_us"] = rec.elapsed_us;
  return j.dump();
}

SweepRecord sweep_record_from_json(const std::string& line) {
  try {
    const auto j = ordered_json::parse(line);
    SweepRecord rec;
    rec.sequence = j.at("seq").get<std::uint64_t>();
    rec.graph6 = j.at("graph6").get<std::string>();
    rec.v = j.at("v").get<int>();
    rec.r = j.at("r").get<int>();
    const std::string test = j.at("test").get<std::string>();
    if (test == positivity_test_name(PositivityTest::GraphPositivity))
      rec.test = PositivityTest::GraphPositivity;
    else if (test == positivity_test_name(PositivityTest::VirialPositivity))
      rec.test = PositivityTest::VirialPositivity;
    else
      fail(ErrorCode::IoError, "unknown test name " + test);
    rec.convention = j.at("k_min").get<int>() == 2 ? KRange::FromTwo : KRange::FromZero;
    for (const auto& pair : j.at("violations"))
      rec.violations.emplace_back(pair.at(0).get<int>(), pair.at(1).get<int>());
    rec.elapsed_us = j.at("elapsed_us").get<std::int64_t>();
    return rec;
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    fail(ErrorCode::IoError, std::string("bad sweep record: ") + e.what());
  }
}

std::optional<Checkpoint> load_checkpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) return std::nullopt;
  try {
    const auto j = ordered_json::parse(in);
    Checkpoint ck;
    ck.fingerprint = j.at("fingerprint").get<std::uint64_t>();
    ck.last_sequence = j.at("last_sequence").get<std::uint64_t>();
    ck.total = j.at("total").get<std::uint64_t>();
    ck.violators = j.at("violators").get<std::uint64_t>();
    return ck;
  } catch (const std::exception& e) {
    fail(ErrorCode::IoError, "bad checkpoint " + path + ": " + e.what());
  }
}

void store_checkpoint(const std::string& path, const Checkpoint& ck) {
  ordered_json j;
  j["fingerprint"] = ck.fingerprint;
  j["last_sequence"] = ck.last_sequence;
  j["total"] = ck.total;
  j["violators"] = ck.violators;
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) fail(ErrorCode::IoError, "cannot write " + tmp);
    out << j.dump() << '\n';
    out.flush();
    if (!out) fail(ErrorCode::IoError, "short write to " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    fail(ErrorCode::IoError, "cannot rename " + tmp + " to " + path);
}

int resolve_thread_count(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("DIMERLAB_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

SweepSummary run_sweep(const SweepOptions& options) {
  const std::uint64_t fingerprint = spec_fingerprint(options.source);

  Checkpoint ck;
  ck.fingerprint = fingerprint;
  const bool checkpointing = !options.checkpoint_path.empty();
  if (checkpointing) {
    if (const auto prev = load_checkpoint(options.checkpoint_path)) {
      if (prev->fingerprint != fingerprint)
        fail(ErrorCode::InvalidArgument, "checkpoint " + options.checkpoint_path +
                                             " belongs to a different source spec");
      ck = *prev;
    }
  }
  const std::uint64_t resume_last = ck.last_sequence;

  std::ofstream file_out;
  std::ostream* out = nullptr;
  if (options.output_path == "-") {
    out = &std::cout;
  } else if (!options.output_path.empty()) {
    file_out.open(options.output_path, std::ios::app);
    if (!file_out) fail(ErrorCode::IoError, "cannot open " + options.output_path);
    out = &file_out;
  }

  struct Job {
    std::uint64_t seq = 0;
    Graph g;
  };

  const int nworkers = resolve_thread_count(options.threads);
  BoundedQueue<Job> jobs(static_cast<std::size_t>(4 * nworkers));
  BoundedQueue<SweepRecord> results(static_cast<std::size_t>(4 * nworkers));
  std::atomic<bool> stop{false};
  std::atomic<int> live_workers{nworkers};
  std::mutex err_mutex;
  std::exception_ptr err;
  auto note_error = [&] {
    std::lock_guard lk(err_mutex);
    if (!err) err = std::current_exception();
  };

  std::thread producer([&] {
    try {
      std::uint64_t seq = 0;
      for_each_graph(options.source, [&](const Graph& g) {
        ++seq;
        if (seq <= resume_last) return true;
        if (stop.load(std::memory_order_relaxed)) return false;
        return jobs.push(Job{seq, g});
      });
    } catch (...) {
      note_error();
      stop.store(true);
    }
    jobs.close();
  });

  std::vector<std::thread> workers;
  workers.reserve(nworkers);
  for (int w = 0; w < nworkers; ++w) {
    workers.emplace_back([&] {
      try {
        while (auto job = jobs.pop()) {
          const auto t0 = std::chrono::steady_clock::now();
          const MatchingVector m = count_matchings(job->g);
          PositivityReport report =
              options.test == PositivityTest::GraphPositivity
                  ? test_graph_positivity(m, job->g.r, options.convention, job->g.label)
                  : test_virial_positivity(m, job->g.label);
          SweepRecord rec;
          rec.sequence = job->seq;
          rec.graph6 = emit_graph6(job->g);
          rec.v = job->g.vertex_count();
          rec.r = job->g.r;
          rec.test = options.test;
          rec.convention = options.test == PositivityTest::VirialPositivity
                               ? KRange::FromTwo
                               : options.convention;
          rec.violations = std::move(report.violations);
          rec.elapsed_us = std::chrono::duration_cast<std::chrono::microseconds>(
                               std::chrono::steady_clock::now() - t0)
                               .count();
          if (!results.push(std::move(rec))) break;
        }
      } catch (...) {
        note_error();
        stop.store(true);
        jobs.close();
      }
      if (live_workers.fetch_sub(1) == 1) results.close();
    });
  }

  // single writer: reorder buffer keyed by sequence; tallies advance with the
  // contiguous watermark so checkpoints always describe a completed prefix
  std::map<std::uint64_t, SweepRecord> pending;
  std::uint64_t watermark = resume_last;
  std::uint64_t written = 0;
  bool aborted = false;
  auto write_line = [&](const SweepRecord& rec) {
    if (out && (!options.violators_only || !rec.violations.empty())) {
      *out << to_jsonl(rec) << '\n';
      ++written;
      if (options.abort_after != 0 && written >= options.abort_after) {
        aborted = true;
        stop.store(true);
        jobs.close();
      }
    }
  };
  while (auto rec = results.pop()) {
    if (aborted) continue;
    const std::uint64_t seq = rec->sequence;
    if (!options.ordered) write_line(*rec);
    pending.emplace(seq, std::move(*rec));
    while (!pending.empty() && pending.begin()->first == watermark + 1 && !aborted) {
      const SweepRecord& front = pending.begin()->second;
      if (options.ordered) write_line(front);
      ++watermark;
      ck.last_sequence = watermark;
      ck.total += 1;
      ck.violators += front.violations.empty() ? 0 : 1;
      if (checkpointing) {
        if (out) out->flush();
        store_checkpoint(options.checkpoint_path, ck);
      }
      pending.erase(pending.begin());
    }
  }

  producer.join();
  for (auto& w : workers) w.join();
  if (err) std::rethrow_exception(err);
  if (out) out->flush();
  if (checkpointing) store_checkpoint(options.checkpoint_path, ck);

  SweepSummary summary;
  summary.total = ck.total;
  summary.violators = ck.violators;
  summary.last_sequence = ck.last_sequence;
  summary.aborted = aborted;
  return summary;
}

SampleStats sample_positivity_stats(const SourceSpec& source, PositivityTest test,
                                    KRange convention, int threads) {
  if (source.kind != SourceKind::Sample)
    fail(ErrorCode::InvalidArgument, "sample statistics need a sampling source");
  SweepOptions options;
  options.source = source;
  options.test = test;
  options.convention = convention;
  options.threads = threads;
  const SweepSummary summary = run_sweep(options);

  SampleStats stats;
  stats.count = summary.total;
  stats.satisfied = summary.total - summary.violators;
  if (stats.count == 0) return stats;
  const double n = static_cast<double>(stats.count);
  const double phat = static_cast<double>(stats.satisfied) / n;
  const double z = 1.959963984540054;  // 95% normal quantile
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (phat + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n)) / denom;
  stats.fraction = phat;
  stats.ci_low = std::max(0.0, center - half);
  stats.ci_high = std::min(1.0, center + half);
  return stats;
}

}  // namespace dimerlab
