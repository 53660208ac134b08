#include <cmath>

#include "doctest.h"
#include "setlab/quadtree.hpp"

using namespace setlab;
using namespace setlab::qt;

namespace {

LinearHash identity(std::uint64_t range) {
  LinearHash h;
  h.a = 1;
  h.range = range;
  return h;
}

CharVector random_vector(std::size_t n, double density, Rng& rng) {
  std::vector<Value> ones;
  for (std::size_t p = 0; p < n; ++p) {
    if (rng.unit() < density) ones.push_back(static_cast<Value>(p));
  }
  return char_vector(ones, identity(n), n);
}

std::vector<std::uint8_t> dense(const SubVector& sub, std::size_t Z) {
  std::vector<std::uint8_t> v(Z, 0);
  for (Pos p : sub.ones) v[p - sub.base] = 1;
  return v;
}

std::vector<std::uint8_t> bits(std::size_t Z, Rng& rng) {
  std::vector<std::uint8_t> v(Z);
  for (auto& b : v) b = rng.unit() < 0.3 ? 1 : 0;
  return v;
}

}  // namespace

TEST_CASE("linear hash is exactly additive") {
  Rng rng(3);
  for (std::uint64_t range : {1u, 2u, 7u, 64u, 100u}) {
    const LinearHash h = LinearHash::random(range, rng);
    CHECK(h.candidate_count == 1);
    for (int k = 0; k < 200; ++k) {
      const Value x = rng.between(-1000, 1000);
      const Value y = rng.between(-1000, 1000);
      CHECK(h(x) < range);
      CHECK((h(x) + h(y)) % range == h.sum_candidates(x + y)[0]);
    }
  }
}

TEST_CASE("bucketize examples") {
  std::vector<Value> a{1, 2, 3, 4, 5, 6, 7, 8};
  const auto b1 = bucketize(a, a, 4, identity(4));
  for (const auto& bucket : b1.a) CHECK(bucket.size() == 2);
  CHECK(b1.overflow_a.empty());
  CHECK(b1.cap == 6);

  std::vector<Value> zeros{0, 4, 8, 12, 16, 20, 24, 28};
  const auto b2 = bucketize(zeros, a, 4, identity(4));
  CHECK(b2.a[0].size() == 6);
  CHECK(b2.overflow_a == std::vector<Value>{24, 28});
  CHECK(b2.count_a(24) == 1);

  const auto b3 = bucketize({}, {}, 3, identity(3));
  for (const auto& bucket : b3.a) CHECK(bucket.empty());
  CHECK_THROWS(bucketize(a, a, 4, identity(5)));
}

TEST_CASE("every element lands in one bucket or the overflow") {
  Rng rng(8);
  std::vector<Value> A;
  std::vector<Value> B;
  for (int k = 0; k < 100; ++k) {
    A.push_back(rng.between(0, 50));
    B.push_back(rng.between(0, 50));
  }
  const auto bk = bucketize(A, B, 5, LinearHash::random(5, rng));
  std::vector<Value> back = bk.overflow_a;
  for (const auto& bucket : bk.a) {
    CHECK(bucket.size() <= bk.cap);
    back.insert(back.end(), bucket.begin(), bucket.end());
  }
  std::sort(back.begin(), back.end());
  CHECK(back == bk.sorted_a);
}

TEST_CASE("characteristic vectors") {
  const auto one = char_vector(std::vector<Value>{5}, identity(8), 8);
  CHECK(one.ones == std::vector<Pos>{5});
  const auto folded = char_vector(std::vector<Value>{3, 11}, identity(8), 8);
  CHECK(folded.ones == std::vector<Pos>{3});
  const auto rec = folded.recovery(3);
  CHECK(std::vector<Value>(rec.begin(), rec.end()) == std::vector<Value>{3, 11});
  CHECK(folded.recovery(4).empty());
  CHECK(char_vector(std::vector<Value>{}, identity(8), 8).ones.empty());
}

TEST_CASE("convolution examples") {
  const std::vector<std::uint8_t> v{1, 0, 0, 1};
  const std::vector<std::uint8_t> w{0, 1, 0, 0};
  CHECK(convolve(v, w) == std::vector<std::uint32_t>{0, 1, 0, 0, 1, 0, 0});
  CHECK(convolve(v, std::vector<std::uint8_t>(4, 0)) == std::vector<std::uint32_t>(7, 0));
  CHECK(convolve(std::vector<std::uint8_t>{1}, std::vector<std::uint8_t>{1}) ==
        std::vector<std::uint32_t>{1});
}

TEST_CASE("shift sets for v=[1,0,0,1], u=[0,1,0,0]") {
  const auto inst = build_shift_sets({{1, 0, 0, 1}}, {{0, 1, 0, 0}}, 4);
  CHECK(inst.q() == 2);
  CHECK(inst.universe() == 7);
  // positions 0..6 stored as 1..7
  CHECK(inst.sets()[0] == std::vector<Elem>{1, 4});  // {0,3}
  CHECK(inst.sets()[1] == std::vector<Elem>{2, 5});  // {1,4}
  CHECK(inst.sets()[2] == std::vector<Elem>{5});     // shift 3: {4}
  CHECK(inst.sets()[3] == std::vector<Elem>{3});     // shift 1: {2}
  CHECK(inst.sets()[4] == std::vector<Elem>{1});     // shift -1: {0}

  const SetSystem sys = inst.system();
  const SdQuery sd = [&](std::size_t a, std::size_t b) { return oracle_intersect(sys, a, b).disjoint; };
  CHECK(conv_position_nonzero(inst, 0, 2, 1, sd));
  CHECK_FALSE(conv_position_nonzero(inst, 0, 2, 2, sd));
  CHECK(conv_position_nonzero(inst, 0, 2, 4, sd));
  CHECK_THROWS(conv_position_nonzero(inst, 0, 2, 7, sd));

  const auto zero = build_shift_sets({{0, 0, 0, 0}}, {{0, 1, 0, 0}}, 4);
  const SetSystem zs = zero.system();
  for (std::size_t j = 0; j <= 6; ++j) {
    CHECK_FALSE(conv_position_nonzero(zero, 0, 2, j, [&](std::size_t a, std::size_t b) {
      return oracle_intersect(zs, a, b).disjoint;
    }));
  }
}

TEST_CASE("convolution and shift-set intersection agree") {
  Rng rng(12);
  for (std::size_t Z : {4u, 9u, 16u}) {
    for (int trial = 0; trial < 40; ++trial) {
      const auto v = bits(Z, rng);
      const auto w = bits(Z, rng);
      const auto inst = build_shift_sets({v}, {w}, Z);
      const SetSystem sys = inst.system();
      const auto c = convolve(v, w);
      for (std::size_t j = 0; j < c.size(); ++j) {
        const auto [x, y] = inst.sets_for(0, inst.q(), j);
        const QueryResult common = oracle_intersect(sys, x, y);
        CHECK((c[j] > 0) == !common.disjoint);
        CHECK(common.out() == c[j]);
        for (Elem e : common.elements) {
          const auto [p, q] = inst.decode(j, e);
          CHECK(p + q == j);
          CHECK(v[p] == 1);
          CHECK(w[q] == 1);
        }
      }
    }
  }
}

TEST_CASE("twosum scan") {
  const std::vector<Value> a{1, 3};
  const std::vector<Value> b{2, 4};
  auto got = twosum_scan(a, b, 5);
  std::sort(got.begin(), got.end());
  CHECK(got == std::vector<ValuePair>{{1, 4}, {3, 2}});
  CHECK(twosum_scan({}, b, 5).empty());
  CHECK(twosum_scan(std::vector<Value>{2}, std::vector<Value>{2}, 4) == std::vector<ValuePair>{{2, 2}});
  const std::vector<Value> dup_a{1, 1, 2};
  const std::vector<Value> dup_b{3, 4, 4};
  got = twosum_scan(dup_a, dup_b, 5);
  std::sort(got.begin(), got.end());
  CHECK(got == all_pairs_summing(dup_a, dup_b, 5));
  std::uint64_t probes = 0;
  twosum_scan(dup_a, dup_b, 5, &probes);
  CHECK(probes <= dup_a.size() + dup_b.size() + got.size());
}

TEST_CASE("leaf duplication splits dense windows") {
  std::vector<Value> ones{0, 1, 2, 3, 4};
  const auto cv = char_vector(ones, identity(32), 32);
  const auto seq = leaf_sequence(cv, 16, 2);
  CHECK(seq.size() == 4);  // 3 copies for the first window, 1 for the second
  CHECK(seq[0].ones == std::vector<Pos>{0, 1});
  CHECK(seq[1].ones == std::vector<Pos>{2, 3});
  CHECK(seq[2].ones == std::vector<Pos>{4});
  CHECK(seq[2].base == 0);
  CHECK(seq[3].ones.empty());
  CHECK(seq[3].base == 16);
}

TEST_CASE("plain quad tree root equals the full convolution") {
  Rng rng(4);
  const auto vA = random_vector(16, 0.4, rng);
  const auto vB = random_vector(16, 0.4, rng);
  const QuadForest f = build_quadtree(vA, vB, 4, 0.0, 4);
  CHECK(f.shape().implicit == 0);
  const auto root = f.conv(0, 0, f.shape().height, 0, 0);
  std::vector<std::uint8_t> a(16, 0), b(16, 0);
  for (Pos p : vA.ones) a[p] = 1;
  for (Pos p : vB.ones) b[p] = 1;
  const auto want = convolve(a, b);
  REQUIRE(root.size() == want.size());
  CHECK(std::equal(root.begin(), root.end(), want.begin()));
}

TEST_CASE("quad tree nodes agree with direct convolution") {
  Rng rng(21);
  for (int trial = 0; trial < 10; ++trial) {
    const auto vA = random_vector(64, 0.3, rng);
    const auto vB = random_vector(64, 0.3, rng);
    const QuadForest f = build_quadtree(vA, vB, 16, 0.25, trial % 2 == 0 ? 2 : 64);
    const auto& shape = f.shape();
    CHECK(shape.implicit == 2);
    for (std::size_t level = 0; level <= shape.height; ++level) {
      const std::size_t Z = shape.length(level);
      for (std::size_t kA = 0; kA < f.entries(level); ++kA) {
        for (std::size_t kB = 0; kB < f.entries(level); ++kB) {
          const SubVector& sa = f.a_sub(0, level, kA);
          const SubVector& sb = f.b_sub(0, level, kB);
          const auto want = convolve(dense(sa, Z), dense(sb, Z));
          if (f.is_explicit(level)) {
            const auto got = f.conv(0, 0, level, kA, kB);
            if (sa.ones.empty() || sb.ones.empty()) {
              CHECK(got.empty());
              continue;
            }
            CHECK(std::equal(got.begin(), got.end(), want.begin(), want.end()));
          } else {
            for (std::size_t t = 0; t < want.size(); ++t) {
              CHECK(f.position_nonzero(0, 0, level, kA, kB, t, nullptr) == (want[t] > 0));
            }
          }
        }
      }
    }
  }
}

TEST_CASE("ts_build and queries") {
  const std::vector<Value> A{1, 2};
  const std::vector<Value> B{3, 4};
  const auto st = ts_build(A, B, 1, 0.0, 1);
  const auto w = st.query(5);
  REQUIRE(w.has_value());
  CHECK(w->first + w->second == 5);
  CHECK_FALSE(st.query(100).has_value());
  CHECK(threesum_solve(A, B, std::vector<Value>{6, 100}, 1, 0.0));
  CHECK_FALSE(threesum_solve(A, B, std::vector<Value>{0, 100}, 1, 0.0));
  CHECK_FALSE(threesum_solve(A, B, std::vector<Value>{}, 1, 0.0));
  CHECK_THROWS(ts_build(A, B, 3, 0.0, 1));

  const std::vector<Value> one{7};
  const auto single = ts_build(one, one, 1, 0.5, 2);
  CHECK(single.R() == 1);
  CHECK(single.query(14).has_value());

  const std::vector<Value> sa{1, 5};
  const std::vector<Value> sb{4, 0};
  const auto si = ts_build(sa, sb, 2, 0.25, 3, true);
  CHECK(si.query_reporting(5) == std::vector<ValuePair>{{1, 4}, {5, 0}});
  CHECK(si.query_reporting(100).empty());
}

TEST_CASE("level parameters follow the formulas") {
  Rng rng(5);
  std::vector<Value> A;
  std::vector<Value> B;
  for (int k = 0; k < 16; ++k) {
    A.push_back(rng.between(0, 200));
    B.push_back(rng.between(0, 200));
  }
  const auto st = ts_build(A, B, 4, 0.5, 9);
  const auto info = st.forest().level_info();
  REQUIRE(info.size() == st.forest().shape().implicit);
  for (const auto& li : info) {
    CHECK(li.universe == 2 * li.Z - 1);
    CHECK(static_cast<double>(li.universe) <= 2 * li.u_i);
    CHECK(li.N_i == doctest::Approx(16 * std::sqrt(li.u_i)));
    CHECK(li.m_i == doctest::Approx(16 * std::sqrt(4 / li.u_i)));
  }
}

TEST_CASE("3SUM index matches brute force on random arrays") {
  for (bool si : {false, true}) {
    const auto w = gen_threesum_workload(128, 128 * 128, 120, si ? 7 : 8);
    const auto st = ts_build(w.A, w.B, 16, 0.25, 5, si);
    for (Value z : w.queries) {
      const auto want = all_pairs_summing(w.A, w.B, z);
      const auto got = st.query(z);
      CHECK(got.has_value() == !want.empty());
      if (got) CHECK(got->first + got->second == z);
      if (si) CHECK(st.query_reporting(z) == want);
    }
  }
}
