// dimerlab: positivity sweeps and lattice series for monomer-dimer systems.
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dimerlab/error.hpp"
#include "dimerlab/graph.hpp"
#include "dimerlab/matchings.hpp"
#include "dimerlab/series.hpp"
#include "dimerlab/sweep.hpp"
#include "json.hpp"

namespace {

using namespace dimerlab;

// 0 success, 2 input error, 3 infeasible request
int exit_code_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::Infeasible:
    case ErrorCode::Unstable:
      return 3;
    default:
      return 2;
  }
}

PositivityTest parse_test(const std::string& name) {
  return name == "virial-positivity" ? PositivityTest::VirialPositivity
                                     : PositivityTest::GraphPositivity;
}

// k_min < 0 means "not given"; virial positivity only exists from k = 2.
KRange resolve_convention(PositivityTest test, int k_min) {
  if (test == PositivityTest::VirialPositivity) {
    if (k_min == 0)
      fail(ErrorCode::InvalidArgument, "virial positivity is defined for k >= 2 only");
    return KRange::FromTwo;
  }
  return k_min == 2 ? KRange::FromTwo : KRange::FromZero;
}

struct ScanArgs {
  bool enumerate = false;
  bool sample = false;
  std::string input;
  int r = 3;
  int v = 6;
  long long count = 100;
  std::uint64_t seed = 0;
  std::string test = "graph-positivity";
  int k_min = -1;
  bool include_disconnected = false;
  bool violators_only = false;
  bool unordered = false;
  int threads = 0;
  std::string checkpoint;
  std::string output = "-";
  std::uint64_t abort_after = 0;
};

int run_scan(const ScanArgs& args) {
  SweepOptions options;
  options.source.kind = args.enumerate ? SourceKind::Enumerate
               : args.sample           ? SourceKind::Sample
                                       : SourceKind::File;
  options.source.r = args.r;
  options.source.v = args.v;
  options.source.connected_only = !args.include_disconnected;
  options.source.count = args.count;
  options.source.seed = args.seed;
  options.source.path = args.input;
  options.test = parse_test(args.test);
  options.convention = resolve_convention(options.test, args.k_min);
  options.threads = args.threads;
  options.violators_only = args.violators_only;
  options.ordered = !args.unordered;
  options.output_path = args.output;
  options.checkpoint_path = args.checkpoint;
  options.abort_after = args.abort_after;

  const SweepSummary summary = run_sweep(options);
  const double fraction =
      summary.total ? static_cast<double>(summary.violators) / static_cast<double>(summary.total)
                    : 0.0;
  std::cerr << "scanned " << summary.total << " graphs, " << summary.violators
            << " violators, violator fraction " << fraction << "\n";
  if (summary.aborted)
    std::cerr << "aborted at sequence " << summary.last_sequence
              << "; rerun with the same --checkpoint to resume\n";
  return 0;
}

struct SeriesArgs {
  std::string lattice = "chain";
  int order = 10;
  std::string target = "entropy";
  std::string output = "-";
};

int run_series(const SeriesArgs& args) {
  const LatticeFamily family =
      args.lattice == "square" ? LatticeFamily::SquareTorus : LatticeFamily::Chain;
  const RationalSeries f = free_energy_series(family, args.order);

  std::vector<std::pair<long long, mpq_class>> rows;
  if (args.target == "entropy") {
    const EntropyExpansion expansion =
        entropy_coefficients(f, family == LatticeFamily::Chain ? 2 : 4);
    for (int k = 2; k <= expansion.order; ++k) rows.emplace_back(k, expansion.a[k - 2]);
  } else {
    const std::vector<mpq_class> b = virial_coefficients(f);
    for (std::size_t i = 0; i < b.size(); ++i)
      rows.emplace_back(static_cast<long long>(i) + 2, b[i]);
  }

  if (args.output == "-") {
    write_rational_csv(std::cout, "k", rows);
  } else {
    std::ofstream out(args.output);
    if (!out) fail(ErrorCode::IoError, "cannot open " + args.output);
    write_rational_csv(out, "k", rows);
  }

  long long first_nonpositive = 0;
  for (const auto& [k, value] : rows)
    if (sgn(value) <= 0) {
      first_nonpositive = k;
      break;
    }
  if (first_nonpositive == 0)
    std::cerr << args.target << " coefficients k = 2.." << args.order << " for the "
              << args.lattice << " lattice: all positive\n";
  else
    std::cerr << args.target << " coefficients for the " << args.lattice
              << " lattice: first nonpositive at k = " << first_nonpositive << "\n";
  return 0;
}

void print_matchings(const Graph& g, bool with_header) {
  if (with_header) std::cout << "# " << emit_graph6(g) << "\n";
  const MatchingVector m = count_matchings(g);
  for (int i = 0; i <= m.n; ++i) std::cout << i << " " << m[i].get_str() << "\n";
}

int run_matchings(const std::string& token) {
  if (std::filesystem::exists(token)) {
    std::ifstream in(token);
    if (!in) fail(ErrorCode::IoError, "cannot open " + token);
    std::vector<Graph> graphs;
    std::string line;
    long long line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty()) continue;
      try {
        graphs.push_back(parse_graph6(line));
      } catch (const Error& e) {
        fail(e.code(), token + " line " + std::to_string(line_no) + ": " + e.what());
      }
    }
    for (const Graph& g : graphs) print_matchings(g, graphs.size() > 1);
    return 0;
  }
  print_matchings(parse_graph6(token), false);
  return 0;
}

struct SampleStatsArgs {
  int r = 3;
  int v = 16;
  long long count = 100;
  std::uint64_t seed = 0;
  std::string test = "graph-positivity";
  int k_min = -1;
  int threads = 0;
};

int run_sample_stats(const SampleStatsArgs& args) {
  SourceSpec spec;
  spec.kind = SourceKind::Sample;
  spec.r = args.r;
  spec.v = args.v;
  spec.count = args.count;
  spec.seed = args.seed;
  const PositivityTest test = parse_test(args.test);
  const KRange convention = resolve_convention(test, args.k_min);
  const SampleStats stats = sample_positivity_stats(spec, test, convention, args.threads);

  nlohmann::ordered_json j;
  j["r"] = args.r;
  j["v"] = args.v;
  j["count"] = stats.count;
  j["seed"] = args.seed;
  j["test"] = positivity_test_name(test);
  j["k_min"] = convention == KRange::FromTwo ? 2 : 0;
  j["satisfied"] = stats.satisfied;
  j["fraction"] = stats.fraction;
  j["ci_low"] = stats.ci_low;
  j["ci_high"] = stats.ci_high;
  std::cout << j.dump() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dimerlab: exact positivity tests and lattice series for monomer-dimer systems"};
  app.require_subcommand(1);

  ScanArgs scan_args;
  CLI::App* scan = app.add_subcommand("scan", "sweep a positivity test over a graph stream");
  auto* source = scan->add_option_group("source", "graph stream (pick one)");
  source->add_flag("--enumerate", scan_args.enumerate, "exhaustive census at --r, --v");
  source->add_flag("--sample", scan_args.sample, "random regular graphs at --r, --v");
  source->add_option("--input", scan_args.input, "graph6 file, one graph per line")
      ->check(CLI::ExistingFile);
  source->require_option(1);
  scan->add_option("--r", scan_args.r, "degree");
  scan->add_option("--v", scan_args.v, "vertices");
  scan->add_option("--count", scan_args.count, "sample size (with --sample)");
  scan->add_option("--seed", scan_args.seed, "sample RNG seed");
  scan->add_option("--test", scan_args.test, "positivity test")
      ->check(CLI::IsMember({"graph-positivity", "virial-positivity"}));
  scan->add_option("--k-min", scan_args.k_min, "difference order the test starts at")
      ->check(CLI::IsMember({0, 2}));
  scan->add_flag("--include-disconnected", scan_args.include_disconnected,
                 "enumerate disconnected graphs too");
  scan->add_flag("--violators-only", scan_args.violators_only, "record only violators");
  scan->add_flag("--unordered", scan_args.unordered, "write records as they finish");
  scan->add_option("--threads", scan_args.threads, "worker count (0: DIMERLAB_THREADS, then cores)");
  scan->add_option("--checkpoint", scan_args.checkpoint, "checkpoint file for resumable runs");
  scan->add_option("--output", scan_args.output, "JSONL path, - for stdout");
  scan->add_option("--abort-after", scan_args.abort_after, "")->group("");

  SeriesArgs series_args;
  CLI::App* series = app.add_subcommand("series", "lattice entropy or virial coefficients");
  series->add_option("--lattice", series_args.lattice, "lattice family")
      ->check(CLI::IsMember({"chain", "square"}));
  series->add_option("--order", series_args.order, "highest coefficient index")->required();
  series->add_option("--target", series_args.target, "coefficient family")
      ->check(CLI::IsMember({"entropy", "virial"}));
  series->add_option("--output", series_args.output, "CSV path, - for stdout");

  std::string matchings_token;
  CLI::App* matchings = app.add_subcommand("matchings", "matching counts m_i of a graph");
  matchings->add_option("graph", matchings_token, "graph6 string, or a file of graph6 lines")
      ->required();

  SampleStatsArgs stats_args;
  CLI::App* stats = app.add_subcommand("sample-stats", "positivity fraction over random graphs");
  stats->add_option("--r", stats_args.r, "degree");
  stats->add_option("--v", stats_args.v, "vertices");
  stats->add_option("--count", stats_args.count, "sample size");
  stats->add_option("--seed", stats_args.seed, "RNG seed");
  stats->add_option("--test", stats_args.test, "positivity test")
      ->check(CLI::IsMember({"graph-positivity", "virial-positivity"}));
  stats->add_option("--k-min", stats_args.k_min, "difference order the test starts at")
      ->check(CLI::IsMember({0, 2}));
  stats->add_option("--threads", stats_args.threads, "worker count");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand(scan)) return run_scan(scan_args);
    if (app.got_subcommand(series)) return run_series(series_args);
    if (app.got_subcommand(matchings)) return run_matchings(matchings_token);
    if (app.got_subcommand(stats)) return run_sample_stats(stats_args);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
