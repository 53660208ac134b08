#include <cmath>

#include "doctest.h"
#include "setlab/apps.hpp"

using namespace setlab;
using namespace setlab::apps;

namespace {

SetSystem canon1() { return SetSystem(4, {{1, 2}, {2, 3}, {4}}); }
SetSystem mini() { return SetSystem(3, {{1}, {2, 3}}); }

// prefix/suffix boundaries located by scanning the string block by block
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> scan_boundaries(const SetSystem& sys,
                                                                              const std::vector<Elem>& str) {
  std::vector<std::size_t> a;
  std::vector<std::size_t> b;
  const std::size_t u = sys.u();
  for (std::size_t i = 1; i <= sys.m(); ++i) {
    const std::size_t start = (i - 1) * u;
    a.push_back(start + u - sys.size_of(i));
    for (std::size_t p = start + u - sys.size_of(i); p < start + u; ++p) {
      CHECK(std::binary_search(sys.set(i).begin(), sys.set(i).end(), str[p]));
    }
  }
  for (std::size_t j = 1; j <= sys.m(); ++j) {
    const std::size_t start = (sys.m() + j - 1) * u;
    b.push_back(start + sys.size_of(j));
    for (std::size_t p = start; p < start + sys.size_of(j); ++p) {
      CHECK(std::binary_search(sys.set(j).begin(), sys.set(j).end(), str[p]));
    }
  }
  return {a, b};
}

}  // namespace

TEST_CASE("range-mode encoding of MINI") {
  const auto enc = rangemode_encode(mini());
  CHECK(enc.str == std::vector<Elem>{2, 3, 1, 1, 2, 3, 1, 2, 3, 2, 3, 1});
  CHECK(enc.a == std::vector<std::size_t>{2, 4});
  CHECK(enc.b == std::vector<std::size_t>{7, 11});
  const auto [a, b] = scan_boundaries(mini(), enc.str);
  CHECK(a == enc.a);
  CHECK(b == enc.b);

  const auto q12 = rangemode_query_range(enc, 1, 2);
  CHECK(q12.lo == 3);
  CHECK(q12.hi == 11);
  CHECK(q12.threshold == 4);
  CHECK(brute_mode(enc.str, 3, 11) == Mode{1, 3});
  CHECK_FALSE(rangemode_decide(enc, 1, 2, brute_mode(enc.str, 3, 11)));

  const auto q11 = rangemode_query_range(enc, 1, 1);
  CHECK(q11.lo == 3);
  CHECK(q11.hi == 7);
  CHECK(brute_mode(enc.str, 3, 7) == Mode{1, 3});
  CHECK(rangemode_decide(enc, 1, 1, brute_mode(enc.str, 3, 7)));
  CHECK_THROWS(rangemode_query_range(enc, 3, 1));
}

TEST_CASE("range-mode boundaries") {
  const SetSystem with_empty(3, {{}, {1, 2, 3}});
  const auto enc = rangemode_encode(with_empty);
  CHECK(enc.a[0] == 3);  // prefix is all of [u]
  const SetSystem single(2, {{2}});
  const auto e1 = rangemode_encode(single);
  CHECK(rangemode_query_range(e1, 1, 1).threshold == 2);
  const auto q = rangemode_query_range(e1, 1, 1);
  CHECK(brute_mode(e1.str, q.lo, q.hi).frequency == 2);
  const SetSystem none(2, {{}});
  const auto e0 = rangemode_encode(none);
  const auto q0 = rangemode_query_range(e0, 1, 1);
  // both blocks hold only the complement: the range is empty, frequency 0
  CHECK(q0.lo == q0.hi + 1);
  CHECK_FALSE(rangemode_decide(e0, 1, 1, Mode{}));
}

TEST_CASE("range-mode decision rule is exact on random systems") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng rng(seed);
    const auto m = static_cast<std::size_t>(rng.between(1, 10));
    const auto u = static_cast<std::uint32_t>(rng.between(1, 12));
    const SetSystem sys = gen_random_instance(m, u, m * u / 3 + 1, seed);
    const auto enc = rangemode_encode(sys);
    CHECK(enc.str.size() == 2 * m * u);
    for (const auto& [i, j] : all_pairs(m)) {
      const auto q = rangemode_query_range(enc, i, j);
      const Mode mode = brute_mode(enc.str, q.lo, q.hi);
      const bool intersecting = !oracle_intersect(sys, i, j).disjoint;
      CHECK(rangemode_decide(enc, i, j, mode) == intersecting);
      CHECK(rangemode_decide_by_element(sys, i, j, mode) == intersecting);
    }
  }
}

TEST_CASE("range-mode baseline on MINI") {
  const auto enc = rangemode_encode(mini());
  const RangeModeBaseline st(enc.str, 3);
  CHECK(st.blocks() == 3);
  CHECK(st.query(3, 11) == Mode{1, 3});
  CHECK(st.query(5, 5) == Mode{2, 1});
  CHECK(st.query(1, 12) == Mode{1, 4});
  CHECK(st.reporting(1, 12) == std::vector<Elem>{1, 2, 3});
  CHECK(st.reporting(3, 11) == std::vector<Elem>{1, 2, 3});
  CHECK(st.reporting(5, 5) == std::vector<Elem>{2});
  CHECK_THROWS(st.query(4, 3));
  CHECK_THROWS(RangeModeBaseline(enc.str, 0));
  CHECK_THROWS(RangeModeBaseline(enc.str, 13));
}

TEST_CASE("range-mode baseline matches brute force") {
  Rng rng(77);
  std::vector<Elem> str;
  for (int k = 0; k < 300; ++k) str.push_back(static_cast<Elem>(rng.between(1, 12)));
  for (std::size_t b : {1u, 4u, 7u, 16u, 300u}) {
    const RangeModeBaseline st(str, b);
    for (int q = 0; q < 400; ++q) {
      std::size_t lo = static_cast<std::size_t>(rng.between(1, 300));
      std::size_t hi = static_cast<std::size_t>(rng.between(1, 300));
      if (lo > hi) std::swap(lo, hi);
      CHECK(st.query(lo, hi) == brute_mode(str, lo, hi));
      CHECK(st.reporting(lo, hi) == brute_mode_all(str, lo, hi));
    }
  }
}

TEST_CASE("range-mode baseline words scale as b^2 + n") {
  Rng rng(5);
  std::vector<Elem> str;
  for (int k = 0; k < 4096; ++k) str.push_back(static_cast<Elem>(rng.between(1, 64)));
  for (std::size_t b = 4; b <= 128; b *= 2) {
    const RangeModeBaseline st(str, b);
    const double ratio = static_cast<double>(st.words()) / static_cast<double>(b * b + str.size());
    CHECK(ratio >= 0.25);
    CHECK(ratio <= 4.0);
  }
}

TEST_CASE("distance-oracle encoding") {
  const auto g = distoracle_encode(canon1());
  CHECK(g.vertices() == 7);
  CHECK(g.edges() == 5);
  CHECK(bfs_distance(g, 1, 2) == std::optional<std::size_t>{2});
  CHECK_FALSE(bfs_distance(g, 1, 3).has_value());
  CHECK(bfs_distance(g, 2, 2) == std::optional<std::size_t>{0});
  CHECK_THROWS(bfs_distance(g, 1, 4));

  const auto empty = distoracle_encode(SetSystem(3, {{}, {}}));
  CHECK(empty.edges() == 0);
  const auto full = distoracle_encode(SetSystem(5, {{1, 2, 3, 4, 5}}));
  CHECK(full.neighbours(0).size() == 5);
}

TEST_CASE("bipartite distance dichotomy") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const SetSystem sys = gen_random_instance(15, 40, 45, seed);
    const auto g = distoracle_encode(sys);
    CHECK(g.edges() == sys.total());
    for (const auto& [i, j] : all_pairs(sys.m())) {
      if (i == j) continue;
      const auto d = bfs_distance(g, i, j);
      const bool intersecting = !oracle_intersect(sys, i, j).disjoint;
      CHECK((d && *d == 2) == intersecting);
      if (d) CHECK(*d % 2 == 0);
      if (!intersecting && d) CHECK(*d >= 4);
    }
  }
}

TEST_CASE("3SUM encoding of CANON-1") {
  const auto enc = threesum_encode(canon1());
  CHECK(enc.w_m == 2);
  CHECK(enc.w_u == 2);
  CHECK(enc.M() == 4);
  CHECK(enc.A.size() == 5);
  CHECK(enc.B.size() == 5);
  CHECK(std::find(enc.A.begin(), enc.A.end(), 17u) != enc.A.end());
  CHECK(std::find(enc.B.begin(), enc.B.end(), 40u) != enc.B.end());
  CHECK(std::find(enc.B.begin(), enc.B.end(), 52u) != enc.B.end());
  CHECK(decode_a(enc, 17) == Decoded{1, 2});
  CHECK(decode_b(enc, 40) == Decoded{2, 2});
  CHECK(decode_b(enc, 52) == Decoded{1, 1});

  CHECK(threesum_query_number(1, 2, enc) == 57);
  CHECK(threesum_query_number(1, 3, enc) == 61);
  const ThreeSumSolver solver(enc);
  CHECK(solver.solve(57) == std::optional<NumberPair>{NumberPair{17, 40}});
  CHECK_FALSE(solver.solve(61).has_value());
  CHECK_FALSE(solver.solve(0).has_value());
  CHECK(solver.report(57) == std::vector<NumberPair>{{17, 40}});
  for (std::uint64_t v : enc.A) CHECK(v < (std::uint64_t{1} << enc.width()));
  for (std::uint64_t v : enc.B) CHECK(v < (std::uint64_t{1} << enc.width()));
}

TEST_CASE("3SUM encoding with one set over a one-element universe") {
  const auto enc = threesum_encode(SetSystem(1, {{1}}));
  CHECK(enc.width() == 2);
  CHECK(threesum_query_number(1, 1, enc) == 3);
  CHECK(ThreeSumSolver(enc).solve(3).has_value());
}

TEST_CASE("3SUM encoding iff on random systems") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const SetSystem sys = gen_random_instance(12, 30, 80, seed);
    const auto enc = threesum_encode(sys);
    const ThreeSumSolver solver(enc);
    for (const auto& [i, j] : all_pairs(sys.m())) {
      const QueryResult want = oracle_intersect(sys, i, j);
      const auto pairs = solver.report(threesum_query_number(i, j, enc));
      CHECK(pairs.size() == want.out());
      for (const auto& [a, b] : pairs) {
        const Decoded da = decode_a(enc, a);
        const Decoded db = decode_b(enc, b);
        CHECK(da.set == i);
        CHECK(db.set == j);
        CHECK(da.element == db.element);
        CHECK(std::binary_search(want.elements.begin(), want.elements.end(), da.element));
      }
    }
    CHECK(measured_width(enc) <= enc.width());
  }
}
