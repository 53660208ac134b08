#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "setlab/bench.hpp"
#include "setlab/commands.hpp"

using namespace setlab;
using namespace setlab::cli;

namespace {

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "setlab_tests";
  std::filesystem::create_directories(dir);
  return dir / name;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream is(p);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

int run(int (*cmd)(const Config&, std::ostream&), const Config& cfg, std::string* text = nullptr) {
  std::ostringstream out;
  std::ostringstream err;
  const int rc = guarded(cmd, cfg, out, err);
  if (text != nullptr) *text = out.str() + err.str();
  return rc;
}

Config canon_config() {
  const auto path = scratch("canon.txt");
  save_instance(SetSystem(4, {{1, 2}, {2, 3}, {4}}), path.string());
  Config cfg;
  cfg.in = path.string();
  return cfg;
}

}  // namespace

TEST_CASE("csv layout") {
  bench::BenchRecord r;
  r.structure = "alg1";
  r.param = 4;
  r.words = 100;
  r.probes_mean = 2.5;
  r.probes_p99 = 7;
  r.out_mean = 1;
  r.queries = 10;
  std::ostringstream os;
  bench::write_csv(os, std::vector<bench::BenchRecord>{r});
  CHECK(os.str() ==
        "# setlab-bench-csv v1\n"
        "structure,param,words,probes_mean,probes_p99,out_mean,queries,ms\n"
        "alg1,4,100,2.500,7,1.000,10,0.000\n");
}

TEST_CASE("loglog slope") {
  const std::vector<double> x{1, 2, 4, 8};
  const std::vector<double> y{64, 32, 16, 8};
  CHECK(*bench::loglog_slope(x, y) == doctest::Approx(-1.0));
  CHECK_FALSE(bench::loglog_slope(std::vector<double>{1}, std::vector<double>{1}).has_value());
}

TEST_CASE("sweep is independent of the thread count and monotone in words") {
  bench::RunConfig cfg;
  cfg.m = 60;
  cfg.u = 300;
  cfg.n = 3000;
  const SetSystem sys = bench::generate(cfg);
  const auto pairs = random_pairs(sys.m(), 400, 2);
  const auto params = bench::default_sweep();
  for (const char* s : {"alg1", "alg3"}) {
    const auto one = bench::run_sweep(sys, s, params, pairs, 1, false);
    const auto four = bench::run_sweep(sys, s, params, pairs, 4, false);
    std::ostringstream a, b;
    bench::write_csv(a, one);
    bench::write_csv(b, four);
    CHECK(a.str() == b.str());
    REQUIRE(one.size() == 8);
    const auto floor = bench::words_floor(sys, s);
    for (std::size_t k = 1; k < one.size(); ++k) {
      CHECK(one[k].words - floor <= one[k - 1].words - floor);
    }
  }
}

TEST_CASE("gen is deterministic") {
  Config cfg;
  cfg.m = 10;
  cfg.u = 30;
  cfg.n = 80;
  cfg.seed = 5;
  cfg.out = scratch("g1.txt").string();
  CHECK(run(cmd_gen, cfg) == kOk);
  cfg.out = scratch("g2.txt").string();
  CHECK(run(cmd_gen, cfg) == kOk);
  CHECK(slurp(scratch("g1.txt")) == slurp(scratch("g2.txt")));
  cfg.out.clear();
  CHECK(run(cmd_gen, cfg) == kConfig);
}

TEST_CASE("verify CANON-1 with alg3 r=1") {
  Config cfg = canon_config();
  cfg.structure = "alg3";
  cfg.param = 1;
  std::string text;
  CHECK(run(cmd_verify, cfg, &text) == kOk);
  CHECK(text.rfind("pass alg3", 0) == 0);
  for (const char* s : {"alg1", "alg2", "sdcount", "oracle"}) {
    cfg.structure = s;
    CHECK(run(cmd_verify, cfg) == kOk);
  }
  cfg.structure = "hybrid";
  cfg.param = 1000;
  CHECK(run(cmd_verify, cfg) == kOk);
}

TEST_CASE("query output lines") {
  Config cfg = canon_config();
  cfg.structure = "alg1";
  cfg.param = 1;
  const auto pairs = scratch("pairs.txt");
  {
    std::ofstream os(pairs);
    os << "1 2\n1 3\n2 2\n";
  }
  cfg.pairs = pairs.string();
  cfg.out = scratch("answers.txt").string();
  CHECK(run(cmd_query, cfg) == kOk);
  CHECK(slurp(cfg.out) == "1 2 1 2\n1 3 0\n2 2 2 2 3\n");
}

TEST_CASE("distinct exit codes") {
  Config cfg;
  cfg.in = scratch("missing.txt").string();
  std::filesystem::remove(cfg.in);
  CHECK(run(cmd_verify, cfg) == kIo);

  const auto bad = scratch("bad.txt");
  {
    std::ofstream os(bad);
    os << "1 4\n1 5\n";
  }
  cfg.in = bad.string();
  CHECK(run(cmd_verify, cfg) == kParse);

  cfg = canon_config();
  cfg.structure = "nope";
  CHECK(run(cmd_verify, cfg) == kConfig);
  cfg.structure = "alg2";
  cfg.param = 0;
  CHECK(run(cmd_build, cfg) == kConfig);
  cfg.target = "unknown";
  CHECK(run(cmd_reduce, cfg) == kConfig);
}

TEST_CASE("bench writes a reproducible csv") {
  Config cfg;
  cfg.m = 40;
  cfg.u = 200;
  cfg.n = 1500;
  cfg.structure = "alg1";
  cfg.queries = 300;
  cfg.threads = 3;
  cfg.out = scratch("b1.csv").string();
  CHECK(run(cmd_bench, cfg) == kOk);
  cfg.out = scratch("b2.csv").string();
  CHECK(run(cmd_bench, cfg) == kOk);
  const std::string csv = slurp(cfg.out);
  CHECK(csv == slurp(scratch("b1.csv")));
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 10);
}

TEST_CASE("reductions through the command layer") {
  Config cfg = canon_config();
  cfg.report = true;
  std::string text;
  cfg.target = "universe";
  cfg.eps = 0.25;
  CHECK(run(cmd_reduce, cfg, &text) == kOk);
  CHECK(text.find("mismatches 0") != std::string::npos);

  for (const char* t : {"rangemode", "distoracle", "threesum"}) {
    cfg.target = t;
    cfg.out = scratch(std::string(t) + ".txt").string();
    CHECK(run(cmd_reduce, cfg, &text) == kOk);
    CHECK(text.find(" -> ") != std::string::npos);
    CHECK(text.find("mismatches") == std::string::npos);
  }
  CHECK(slurp(scratch("rangemode.txt")) == "3\n4\n1\n2\n1\n4\n2\n3\n1\n2\n3\n4\n1\n2\n3\n4\n2\n3\n1\n4\n4\n1\n2\n3\n");

  Config qt;
  qt.target = "quadtree";
  qt.n = 64;
  qt.x = 16;
  qt.queries = 20;
  qt.report = true;
  CHECK(run(cmd_reduce, qt, &text) == kOk);
  CHECK(text.find("mismatches 0") != std::string::npos);
  qt.si = true;
  CHECK(run(cmd_reduce, qt, &text) == kOk);
  CHECK(text.find("mismatches 0") != std::string::npos);
}
