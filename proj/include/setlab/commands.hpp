#pragma once

// Subcommands behind the `setlab` executable. Each returns a process exit
// code and writes its report to `out`.

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>

#include "setlab/bench.hpp"

namespace setlab::cli {

enum Exit : int {
  kOk = 0,
  kMismatch = 1,
  kConfig = 2,
  kIo = 3,
  kParse = 4,
};

struct Config : bench::RunConfig {
  // reduce
  std::string target;            // universe | quadtree | rangemode | distoracle | threesum
  double eps = 0.25;
  std::string mode = "sd";
  std::optional<double> alpha;
  std::string inner = "oracle";
  std::optional<std::size_t> budget;  // false-positive budget B
  std::size_t x = 16;
  bool si = false;
  std::string queries_file;      // quadtree query sums, one per line
  bool report = false;
};

int cmd_gen(const Config& cfg, std::ostream& out);
int cmd_build(const Config& cfg, std::ostream& out);
int cmd_query(const Config& cfg, std::ostream& out);
int cmd_verify(const Config& cfg, std::ostream& out);
int cmd_bench(const Config& cfg, std::ostream& out);
int cmd_reduce(const Config& cfg, std::ostream& out);

/// Runs `body` and maps exceptions to exit codes, printing the message to err.
int guarded(int (*body)(const Config&, std::ostream&), const Config& cfg, std::ostream& out,
            std::ostream& err);

}  // namespace setlab::cli
