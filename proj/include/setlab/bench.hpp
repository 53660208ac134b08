#pragma once

// Tradeoff sweeps: build one structure per parameter value, run a fixed query
// workload on a worker pool and summarize the cost counters as CSV rows.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "setlab/core.hpp"

namespace setlab::bench {

inline constexpr const char* kCsvHeader = "# setlab-bench-csv v1";
inline constexpr const char* kCsvColumns =
    "structure,param,words,probes_mean,probes_p99,out_mean,queries,ms";

struct BenchRecord {
  std::string structure;
  std::uint64_t param = 0;
  std::uint64_t words = 0;
  double probes_mean = 0;
  std::uint64_t probes_p99 = 0;
  double out_mean = 0;
  std::size_t queries = 0;
  double ms = 0;
};

/// Everything a run depends on. Two runs with equal configs write identical
/// files (wall time is only recorded when `timing` is set).
struct RunConfig {
  std::uint64_t seed = 1;
  // instance
  std::size_t m = 50;
  std::uint32_t u = 200;
  std::size_t n = 2000;
  std::string generator = "uniform";  // or "skewed"
  double size_exponent = 0.9;
  double element_exponent = 1.4;
  // structure
  std::string structure = "alg1";  // alg1 | alg2 | alg3 | sdcount | hybrid | oracle
  std::uint64_t param = 16;
  std::vector<std::uint64_t> sweep;
  std::size_t queries = 1000;
  std::size_t threads = 1;
  bool timing = false;
  // files
  std::string in;
  std::string out;
  std::string pairs;
};

SetSystem generate(const RunConfig& cfg);

/// The structures the CLI can build, by name. sdcount is not a reporting
/// index and is wrapped so queries report nothing but still pay its probes.
std::unique_ptr<IntersectionIndex> make_index(const SetSystem& sys, const std::string& structure,
                                              std::uint64_t param);
bool known_structure(const std::string& structure);

/// Words retained with the parameter at its space-minimal end (r = N for the
/// threshold structures), i.e. what every point of a sweep pays regardless.
std::uint64_t words_floor(const SetSystem& sys, const std::string& structure);

/// One record per parameter. Per-query counters are stored by query index, so
/// the summary does not depend on the thread count.
std::vector<BenchRecord> run_sweep(const SetSystem& sys, const std::string& structure,
                                   std::span<const std::uint64_t> params,
                                   std::span<const QueryPair> pairs, std::size_t threads,
                                   bool timing);

/// Default sweep: powers of two 2..256.
std::vector<std::uint64_t> default_sweep();

void write_csv(std::ostream& os, std::span<const BenchRecord> records);

/// Least-squares slope of log(y) against log(x) over points with y > 0.
std::optional<double> loglog_slope(std::span<const double> x, std::span<const double> y);

}  // namespace setlab::bench
