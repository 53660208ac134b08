#pragma once

// Encoders that turn a SetDisjointness / SetIntersection instance into range
// mode, distance oracle and 3SUM-Indexing instances, with brute-force solvers
// for the target problems and a block-precomputed range-mode baseline.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "setlab/core.hpp"

namespace setlab::apps {

// -- range mode ---------------------------------------------------------------

struct RangeModeEncoding {
  std::size_t m = 0;
  std::uint32_t u = 0;
  std::vector<Elem> str;       // 1-based positions in the API, 0-based storage
  std::vector<std::size_t> a;  // a[i-1]: global end of T_1i's prefix
  std::vector<std::size_t> b;  // b[j-1]: global end of T_2j's prefix
};

/// T_1i = sorted([u] \ S_i) then sorted(S_i); T_2j = sorted(S_j) then
/// sorted([u] \ S_j); STR = T_11..T_1m T_21..T_2m.
RangeModeEncoding rangemode_encode(const SetSystem& sys);

struct RangeQuery {
  std::size_t lo = 0;  // inclusive, 1-based
  std::size_t hi = 0;
  std::size_t threshold = 0;  // mode frequency iff S_i and S_j intersect
};

RangeQuery rangemode_query_range(const RangeModeEncoding& enc, std::size_t i, std::size_t j);

struct Mode {
  Elem element = 0;
  std::size_t frequency = 0;

  bool operator==(const Mode&) const = default;
};

/// Counting scan over str[lo..hi] (1-based, inclusive); ties go to the
/// smaller element.
Mode brute_mode(std::span<const Elem> str, std::size_t lo, std::size_t hi);
std::vector<Elem> brute_mode_all(std::span<const Elem> str, std::size_t lo, std::size_t hi);

/// Intersecting iff the mode frequency reaches the threshold.
bool rangemode_decide(const RangeModeEncoding& enc, std::size_t i, std::size_t j, const Mode& mode);
/// Same decision from the mode element alone, by membership in both sets.
bool rangemode_decide_by_element(const SetSystem& sys, std::size_t i, std::size_t j,
                                 const Mode& mode);

/// Block decomposition: mode and frequency stored for every run of whole
/// blocks; a query combines the stored span with the elements of the partial
/// blocks at both ends.
class RangeModeBaseline {
 public:
  RangeModeBaseline(std::vector<Elem> str, std::size_t blocks);

  Mode query(std::size_t lo, std::size_t hi, CostMeter* meter = nullptr) const;
  /// Every element reaching the mode frequency, ascending.
  std::vector<Elem> reporting(std::size_t lo, std::size_t hi, CostMeter* meter = nullptr) const;

  std::size_t blocks() const noexcept { return blocks_; }
  std::size_t block_len() const noexcept { return block_len_; }
  std::uint64_t words() const;

 private:
  struct Parts {
    std::size_t full_lo = 0;  // first and one-past-last full block
    std::size_t full_hi = 0;
    std::vector<std::size_t> partial;  // 0-based positions outside full blocks
  };
  Parts split(std::size_t lo, std::size_t hi) const;
  std::size_t frequency(Elem e, std::size_t lo, std::size_t hi, CostMeter* meter) const;
  std::size_t cell(std::size_t x, std::size_t y) const;

  std::vector<Elem> str_;
  std::size_t blocks_ = 1;
  std::size_t block_len_ = 1;
  std::vector<Mode> span_;  // upper triangle over block pairs
  std::vector<std::vector<std::uint32_t>> positions_;  // per value, 0-based
};

// -- distance oracle ----------------------------------------------------------

/// Set vertices 0..m-1, element vertices m..m+u-1; one edge per membership.
struct BipartiteEncoding {
  std::size_t m = 0;
  std::uint32_t u = 0;
  std::vector<std::uint32_t> offsets;
  std::vector<std::uint32_t> adjacency;

  std::size_t vertices() const noexcept { return m + u; }
  std::size_t edges() const noexcept { return adjacency.size() / 2; }
  double average_degree() const noexcept {
    return vertices() == 0 ? 0.0 : 2.0 * static_cast<double>(edges()) / static_cast<double>(vertices());
  }
  std::span<const std::uint32_t> neighbours(std::size_t v) const {
    return std::span<const std::uint32_t>(adjacency).subspan(offsets[v], offsets[v + 1] - offsets[v]);
  }
};

BipartiteEncoding distoracle_encode(const SetSystem& sys);

/// Shortest path between set vertices v_i and v_j (1-based); nullopt when
/// unreachable.
std::optional<std::size_t> bfs_distance(const BipartiteEncoding& enc, std::size_t i, std::size_t j);

// -- 3SUM-Indexing ------------------------------------------------------------

/// A holds i + M^2 (x-1) for x in S_i, B holds M j + M^2 (u-x) for x in S_j,
/// with M = 2^w_m, w_m = ceil(log2(m+1)) and w_u = ceil(log2 u).
struct ThreeSumEncoding {
  std::size_t m = 0;
  std::uint32_t u = 0;
  unsigned w_m = 0;
  unsigned w_u = 0;
  std::vector<std::uint64_t> A;
  std::vector<std::uint64_t> B;

  std::uint64_t M() const noexcept { return std::uint64_t{1} << w_m; }
  unsigned width() const noexcept { return 2 * w_m + w_u; }
};

ThreeSumEncoding threesum_encode(const SetSystem& sys);
std::uint64_t threesum_query_number(std::size_t i, std::size_t j, const ThreeSumEncoding& enc);

struct Decoded {
  std::size_t set = 0;
  Elem element = 0;

  bool operator==(const Decoded&) const = default;
};
Decoded decode_a(const ThreeSumEncoding& enc, std::uint64_t value);
Decoded decode_b(const ThreeSumEncoding& enc, std::uint64_t value);

using NumberPair = std::pair<std::uint64_t, std::uint64_t>;

/// Brute-force 3SUM-Indexing over the encoded arrays.
class ThreeSumSolver {
 public:
  explicit ThreeSumSolver(const ThreeSumEncoding& enc);

  std::optional<NumberPair> solve(std::uint64_t z) const;
  std::vector<NumberPair> report(std::uint64_t z) const;

 private:
  std::vector<std::uint64_t> a_;
  std::vector<std::uint64_t> b_;  // sorted
};

/// Number of bits of the largest encoded value.
unsigned measured_width(const ThreeSumEncoding& enc);

}  // namespace setlab::apps
