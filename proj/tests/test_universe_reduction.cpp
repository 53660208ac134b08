#include <cmath>

#include "doctest.h"
#include "setlab/universe_reduction.hpp"

using namespace setlab;
using namespace setlab::ur;

namespace {

SetSystem canon1() { return SetSystem(4, {{1, 2}, {2, 3}, {4}}); }

ReductionParams params(std::uint32_t u, double eps, Mode mode, std::uint64_t seed = 1) {
  ReductionParams p;
  p.u = u;
  p.eps = eps;
  p.mode = mode;
  p.seed = seed;
  return p;
}

void check_against_oracle(const SetSystem& sys, const ReducedStructure& rs, Mode mode) {
  for (const auto& [i, j] : all_pairs(sys.m())) {
    const QueryResult want = oracle_intersect(sys, i, j);
    const QueryResult got = rs.query(i, j);
    CHECK(got.disjoint == want.disjoint);
    if (mode == Mode::SI) CHECK(got.elements == want.elements);
  }
}

}  // namespace

TEST_CASE("classify CANON-1") {
  const auto c = classify(canon1(), 4, 0.25, Mode::SD);
  CHECK(c.large_ids.empty());
  CHECK(c.medium_ids == std::vector<std::size_t>{1, 2});
  CHECK(c.small_ids == std::vector<std::size_t>{3});
  CHECK(c.d() == 0);
  CHECK(c.e() == 2);
  CHECK(c.large_min == 3);
  CHECK(c.small_max == 1);

  const SetSystem with_empty(4, {{}, {1, 2, 3}});
  const auto ce = classify(with_empty, 4, 0.25, Mode::SD);
  CHECK(ce.small_ids == std::vector<std::size_t>{1});
  CHECK(ce.large_ids == std::vector<std::size_t>{2});

  CHECK_THROWS(classify(canon1(), 1, 0.25, Mode::SD));
  CHECK_THROWS(classify(canon1(), 4, 0.0, Mode::SD));
  CHECK_THROWS(classify(canon1(), 4, 0.25, Mode::SI, 0.4));
}

TEST_CASE("classification partitions and respects thresholds") {
  for (Mode mode : {Mode::SD, Mode::SI}) {
    const SetSystem s = gen_random_instance(40, 64, 600, 3);
    const auto c = classify(s, 64, 0.2, mode, 0.8);
    CHECK(c.d() + c.e() + c.small_ids.size() == s.m());
    for (std::size_t i : c.large_ids) CHECK(s.size_of(i) >= c.large_min);
    for (std::size_t i : c.small_ids) CHECK(s.size_of(i) <= c.small_max);
    for (std::size_t i : c.medium_ids) {
      CHECK(s.size_of(i) > c.small_max);
      CHECK(s.size_of(i) < c.large_min);
      if (mode == Mode::SD) CHECK(s.size_of(i) <= 8);  // sqrt(64)
    }
  }
}

TEST_CASE("battery on CANON-1 is accepted at once") {
  const SetSystem s = canon1();
  const auto c = classify(s, 4, 0.25, Mode::SD);
  const auto b = select_hash_battery(s, c, 4, 0, 10, 5);
  CHECK(b.rounds_used == 1);
  CHECK(b.k() == battery_size(s));
  CHECK(b.range == 32);
  CHECK(battery_ok(s, c, b, 0));
}

TEST_CASE("battery separates disjoint singletons") {
  const SetSystem s(100, {{1}, {2}});
  SizeClassification c;
  c.mode = Mode::SD;
  c.medium_ids = {1, 2};
  c.of = {SizeClass::Medium, SizeClass::Medium};
  c.order = {0, 1};
  const auto b = select_hash_battery(s, c, 100, 0, 10, 3);
  bool separated = false;
  for (const auto& h : b.functions) separated |= h(1) != h(2);
  CHECK(separated);
}

TEST_CASE("battery selection rounds on random systems") {
  for (std::uint64_t trial = 0; trial < 20; ++trial) {
    const SetSystem s = gen_random_instance(40, 64, 400, 100 + trial);
    const auto c = classify(s, 64, 0.2, Mode::SD);
    const auto b = select_hash_battery(s, c, 64, 0, 10, trial);
    CHECK(b.rounds_used <= 10);
    CHECK(battery_ok(s, c, b, 0));
  }
}

TEST_CASE("false collisions ignore true common elements") {
  UniversalHash h;
  h.a = 1;
  h.b = 0;
  h.range = 4;  // x -> (x mod 4) + 1
  const std::vector<Elem> a{1, 2, 5};
  const std::vector<Elem> b{2, 9};
  // images {2,3} and {3,2}: common image 2 comes from 1/9 (false), 3 from 2 (true)
  CHECK(false_collisions(a, b, h) == 1);
  CHECK(false_collisions(a, a, h) == 0);
}

TEST_CASE("reduction on CANON-1") {
  const SetSystem s = canon1();
  const auto rs = ReducedStructure::build(s, params(4, 0.25, Mode::SD), oracle_builder());
  CHECK(rs.classification().d() == 0);
  CHECK(rs.inner_count() == rs.battery().k());
  CHECK(rs.hashed(0).m() == 2);
  CostMeter m;
  CHECK(rs.disjoint(1, 3, &m));
  CHECK_FALSE(rs.disjoint(1, 2));
  CHECK_FALSE(rs.disjoint(2, 2));
  check_against_oracle(s, rs, Mode::SD);
}

TEST_CASE("degenerate classes: only small sets, only large sets") {
  const SetSystem small(256, {{1}, {2}, {1, 3}});
  const auto rs = ReducedStructure::build(small, params(256, 0.25, Mode::SD), oracle_builder());
  CHECK(rs.inner_count() == 0);
  check_against_oracle(small, rs, Mode::SD);

  const SetSystem large(9, {{1, 2, 3, 4}, {4, 5, 6, 7}, {1, 7, 8, 9}});
  const auto rl = ReducedStructure::build(large, params(9, 0.25, Mode::SD), oracle_builder());
  CHECK(rl.classification().d() == 3);
  CHECK(rl.inner_count() == 0);
  for (std::size_t a = 0; a < 3; ++a) {
    for (std::size_t b = 0; b < 3; ++b) {
      CHECK(rl.matrix_disjoint(a, b) == oracle_intersect(large, a + 1, b + 1).disjoint);
    }
  }
  ReductionParams pi = params(9, 0.25, Mode::SI);
  pi.alpha = 0.6;  // large iff |S| >= ceil(9^0.4125) = 3
  const auto rsi = ReducedStructure::build(large, pi, oracle_builder());
  CHECK(rsi.classification().d() == 3);
  CHECK(std::vector<Elem>(rsi.matrix_list(0, 1).begin(), rsi.matrix_list(0, 1).end()) ==
        std::vector<Elem>{4});
  check_against_oracle(large, rsi, Mode::SI);
}

TEST_CASE("hashed values stay inside the inner universe") {
  const SetSystem s = gen_random_instance(30, 64, 300, 4);
  const auto rs = ReducedStructure::build(s, params(64, 0.1, Mode::SD), oracle_builder());
  CHECK(rs.inner_universe() == 8 * 64);
  for (std::size_t k = 0; k < rs.inner_count(); ++k) {
    for (const auto& set : rs.hashed(k).sets()) {
      for (Elem e : set) CHECK(e <= 8 * 64);
    }
  }
}

TEST_CASE("reduction agrees with the oracle") {
  std::uint64_t seed = 1;
  for (std::uint32_t u : {16u, 64u, 256u}) {
    for (double eps : {0.1, 0.25}) {
      for (Mode mode : {Mode::SD, Mode::SI}) {
        for (const char* inner : {"oracle", "alg1"}) {
          const SetSystem s = gen_random_instance(30, u, std::min<std::size_t>(30 * u / 3, 900), seed);
          const auto rs = ReducedStructure::build(s, params(u, eps, mode, seed), inner_builder(inner));
          check_against_oracle(s, rs, mode);
          CHECK(battery_ok(s, rs.classification(), rs.battery(), rs.false_positive_budget()));
          ++seed;
        }
      }
    }
  }
}

TEST_CASE("summary line and parameter parsing") {
  const auto rs = ReducedStructure::build(canon1(), params(4, 0.25, Mode::SD), oracle_builder());
  CHECK(rs.summary() == "0 2 " + std::to_string(rs.battery().k()) + " 1 32");
  CHECK(parse_mode("si") == Mode::SI);
  CHECK(std::string(to_string(Mode::SD)) == "sd");
  CHECK_THROWS(parse_mode("xx"));
  CHECK_THROWS(inner_builder("nope"));
  ReductionParams si = params(64, 0.2, Mode::SI);
  si.alpha = 1.0;
  CHECK(default_budget(si) == static_cast<std::size_t>(std::floor(std::pow(64.0, 1.0 - 0.3))));
  CHECK(default_budget(params(64, 0.2, Mode::SD)) == 0);
}
