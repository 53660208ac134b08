#pragma once

// 3SUM-Indexing through hybrid quad trees: arrays are bucketed by a linear
// hash, each bucket becomes a characteristic vector, and for every bucket pair
// a quad tree over sub-vector convolutions locates witnesses for a query sum.
// The upper levels store convolutions explicitly; the bottom levels answer
// "is this convolution position nonzero" through SetDisjointness instances
// built from shifted sub-vectors.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "setlab/core.hpp"
#include "setlab/si_structures.hpp"

namespace setlab::qt {

using Value = std::int64_t;
using Pos = std::uint32_t;

/// h(x) = (a*x) mod range with gcd(a, range) = 1, which is exactly linear.
/// `correction` and `candidate_count` describe an almost-linear family:
/// h(x)+h(y) is h(x+y)+c or h(x+y)+c+1 modulo range.
struct LinearHash {
  std::uint64_t a = 1;
  std::uint64_t range = 1;
  std::uint64_t correction = 0;
  int candidate_count = 1;

  static LinearHash random(std::uint64_t range, Rng& rng);
  std::uint64_t operator()(Value x) const noexcept;
  /// Residues h(x)+h(y) mod range can take when x + y = z.
  std::vector<std::uint64_t> sum_candidates(Value z) const;
};

struct BucketedArrays {
  std::size_t R = 1;
  std::size_t cap = 0;  // floor(3n/R)
  std::vector<std::vector<Value>> a;  // bucket h1 value -> retained elements, sorted
  std::vector<std::vector<Value>> b;
  std::vector<Value> overflow_a;  // sorted
  std::vector<Value> overflow_b;
  std::vector<Value> sorted_a;
  std::vector<Value> sorted_b;

  std::size_t count_a(Value x) const;
  std::size_t count_b(Value y) const;
};

/// Buckets larger than 3n/R keep their `cap` smallest elements; the rest go to
/// the overflow lists.
BucketedArrays bucketize(std::span<const Value> A, std::span<const Value> B, std::size_t R,
                         const LinearHash& h1);

struct CharVector {
  std::size_t length = 0;
  std::vector<Pos> ones;  // sorted
  std::vector<std::uint32_t> offsets;  // recovery CSR over `ones`
  std::vector<Value> values;

  bool at(Pos p) const;
  std::span<const Value> recovery(Pos p) const;
};

CharVector char_vector(std::span<const Value> bucket, const LinearHash& h2, std::size_t n);

/// Schoolbook convolution; the shorter input is zero-padded.
std::vector<std::uint32_t> convolve(std::span<const std::uint8_t> v,
                                    std::span<const std::uint8_t> w);

using ValuePair = std::pair<Value, Value>;

/// All (x, y) with x + y = z, walking A from its end and B from its start.
std::vector<ValuePair> twosum_scan(std::span<const Value> sorted_a,
                                   std::span<const Value> sorted_b, Value z,
                                   std::uint64_t* probes = nullptr);

// -- shift sets ---------------------------------------------------------------

/// SetDisjointness encoding of convolutions of length-Z vectors. Each A-side
/// vector v contributes q = ceil(sqrt Z) sets (v reversed, shifted by s < q);
/// each B-side vector w contributes sets for shifts Z-1-t*q. Positions are
/// stored 1-based over the universe 1..2Z-1.
class ShiftSetInstance {
 public:
  explicit ShiftSetInstance(std::size_t Z);

  std::size_t Z() const noexcept { return Z_; }
  std::size_t q() const noexcept { return q_; }
  std::size_t b_shifts() const noexcept { return b_shifts_; }
  std::uint32_t universe() const noexcept { return static_cast<std::uint32_t>(2 * Z_ - 1); }

  /// Local offsets of the ones (each < Z). Returns the 0-based id of the
  /// vector's first set.
  std::size_t add_a(std::span<const Pos> ones);
  std::size_t add_b(std::span<const Pos> ones);

  /// 1-based set ids whose intersection decides convolution index j.
  std::pair<std::size_t, std::size_t> sets_for(std::size_t a_first, std::size_t b_first,
                                               std::size_t j) const;
  /// Offsets (p, j-p) encoded by a common element of the pair for index j.
  std::pair<Pos, Pos> decode(std::size_t j, Elem common) const;

  const std::vector<std::vector<Elem>>& sets() const noexcept { return sets_; }
  SetSystem system() const;

 private:
  std::size_t Z_;
  std::size_t q_;
  std::size_t b_shifts_;
  std::vector<std::vector<Elem>> sets_;
};

/// Encodes every A-side and B-side vector (0/1, length Z). Vector k of side A
/// starts at set k*q, vector k of side B at a_count*q + k*b_shifts.
ShiftSetInstance build_shift_sets(const std::vector<std::vector<std::uint8_t>>& a_subvectors,
                                  const std::vector<std::vector<std::uint8_t>>& b_subvectors,
                                  std::size_t Z);

using SdQuery = std::function<bool(std::size_t, std::size_t)>;  // true = disjoint

/// One disjointness query decides whether the convolution is nonzero at j.
bool conv_position_nonzero(const ShiftSetInstance& inst, std::size_t a_first,
                           std::size_t b_first, std::size_t j, const SdQuery& disjoint);

// -- hybrid quad trees ----------------------------------------------------------

struct SubVector {
  Pos base = 0;
  std::vector<Pos> ones;  // absolute positions, sorted, all in [base, base + Z)
};

/// Leaf windows of length `leaf_len`; a window with Y > cap ones becomes
/// ceil(Y/cap) copies holding consecutive chunks of cap ones. Zero windows stay.
std::vector<SubVector> leaf_sequence(const CharVector& cv, std::size_t leaf_len, std::size_t cap);

struct TreeShape {
  std::size_t n = 0;          // characteristic vector length
  std::size_t X = 1;
  double eps = 0;
  bool si = false;
  std::size_t implicit = 0;   // levels below this index are set-backed
  std::size_t leaf_len = 1;
  std::size_t cap = 1;
  std::size_t entries = 1;    // padded sub-vector count at the leaf level
  std::size_t height = 0;     // root level

  std::size_t length(std::size_t level) const { return leaf_len << level; }
};

/// SD mode: ceil(2 eps log2 X) implicit levels whose top has length
/// 2^floor(log2 X^(1+eps)) (at most the padded vector length). SI mode: one
/// set-backed leaf level of length X. eps = 0 gives a plain quad tree with
/// leaves of length X.
TreeShape plan_shape(std::size_t n, std::size_t X, double eps, bool si, std::size_t cap);

struct QueryStats {
  std::uint64_t sd_queries = 0;
  std::uint64_t si_queries = 0;
  std::uint64_t false_witnesses = 0;
  std::uint64_t probes = 0;

  QueryStats& operator+=(const QueryStats& o) {
    sd_queries += o.sd_queries;
    si_queries += o.si_queries;
    false_witnesses += o.false_witnesses;
    probes += o.probes;
    return *this;
  }
};

struct LevelInfo {
  std::size_t level = 0;
  std::size_t Z = 0;
  std::size_t universe = 0;
  std::size_t sets = 0;
  std::size_t elements = 0;
  std::size_t max_set_size = 0;
  // formula values for the i-th implicit level, i counted from the top
  double u_i = 0;
  double N_i = 0;
  double m_i = 0;
  double m_proof = 0;  // n R / sqrt(Z)
};

/// Hybrid quad trees for every pair of an A-side and a B-side characteristic
/// vector. Sub-vector sequences are per vector; each set-backed level has one
/// shift-set instance shared by all pairs; explicit convolutions are built per
/// pair on first use.
class QuadForest {
 public:
  QuadForest(std::vector<CharVector> a_side, std::vector<CharVector> b_side, TreeShape shape);

  const TreeShape& shape() const noexcept { return shape_; }
  std::size_t a_count() const noexcept { return a_levels_.size(); }
  std::size_t b_count() const noexcept { return b_levels_.size(); }
  const CharVector& a_vector(std::size_t i) const { return a_side_[i]; }
  const CharVector& b_vector(std::size_t j) const { return b_side_[j]; }
  const SubVector& a_sub(std::size_t i, std::size_t level, std::size_t k) const {
    return a_levels_[i][level][k];
  }
  const SubVector& b_sub(std::size_t j, std::size_t level, std::size_t k) const {
    return b_levels_[j][level][k];
  }
  std::size_t entries(std::size_t level) const { return shape_.entries >> level; }
  bool is_explicit(std::size_t level) const { return level >= shape_.implicit; }

  /// Stored convolution of node (kA, kB) at an explicit level; empty when
  /// either sub-vector has no ones. Materializes the pair on first use.
  std::span<const std::uint32_t> conv(std::size_t i, std::size_t j, std::size_t level,
                                      std::size_t kA, std::size_t kB) const;
  /// Whether the node's convolution is nonzero at local index t, through the
  /// stored vector or one query to the level's set instance.
  bool position_nonzero(std::size_t i, std::size_t j, std::size_t level, std::size_t kA,
                        std::size_t kB, std::size_t t, QueryStats* stats) const;

  /// Leaf node pair whose convolution is nonzero at the target, with the
  /// matching absolute position pairs when the leaf is set-backed in SI mode.
  struct LeafHit {
    std::size_t kA = 0;
    std::size_t kB = 0;
    std::vector<std::pair<Pos, Pos>> positions;
  };
  /// Descends from the root of pair (i, j) toward every leaf whose
  /// convolution is nonzero at global position g. Stops when `leaf` returns false.
  bool search(std::size_t i, std::size_t j, std::uint64_t g,
              const std::function<bool(const LeafHit&)>& leaf, QueryStats* stats) const;

  std::vector<LevelInfo> level_info() const;
  std::size_t materialized_pairs() const;
  std::uint64_t words() const;
  /// Builds every pair's explicit levels.
  void materialize_all() const;

 private:
  struct PairTables {
    // per explicit level: offsets into data per (kA * entries + kB)
    std::vector<std::vector<std::uint32_t>> offsets;
    std::vector<std::vector<std::uint32_t>> data;
  };
  struct LevelInstance {
    std::unique_ptr<ShiftSetInstance> inst;
    std::vector<std::vector<std::size_t>> a_first;  // [vector][k], npos when empty
    std::vector<std::vector<std::size_t>> b_first;
    std::unique_ptr<si::SdCountStructure> sd;     // SD mode
    std::unique_ptr<si::Alg1Structure> si_index;  // SI mode
  };

  const PairTables& pair(std::size_t i, std::size_t j) const;
  std::unique_ptr<PairTables> build_pair(std::size_t i, std::size_t j) const;
  bool descend(std::size_t i, std::size_t j, std::uint64_t g, std::size_t level, std::size_t kA,
               std::size_t kB, const std::function<bool(const LeafHit&)>& leaf,
               QueryStats* stats) const;

  TreeShape shape_;
  std::vector<CharVector> a_side_;
  std::vector<CharVector> b_side_;
  std::vector<std::vector<std::vector<SubVector>>> a_levels_;  // [vector][level][k]
  std::vector<std::vector<std::vector<SubVector>>> b_levels_;
  std::vector<LevelInstance> implicit_;
  mutable std::vector<std::unique_ptr<PairTables>> pairs_;
  mutable std::unique_ptr<std::once_flag[]> pair_once_;
};

/// A single hybrid quad tree for one pair of characteristic vectors.
QuadForest build_quadtree(const CharVector& vA, const CharVector& vB, std::size_t X, double eps,
                          std::size_t cap);

// -- 3SUM-Indexing --------------------------------------------------------------

struct ThreeSumParams {
  std::size_t X = 4;
  double eps = 0.25;
  bool si = false;
  std::uint64_t seed = 1;
};

class ThreeSumIndex {
 public:
  static ThreeSumIndex build(std::span<const Value> A, std::span<const Value> B,
                             const ThreeSumParams& params);

  /// Some (x, y) with x in A, y in B, x + y = z, verified arithmetically.
  std::optional<ValuePair> query(Value z, QueryStats* stats = nullptr) const;
  /// Every witness pair (with multiplicity), sorted.
  std::vector<ValuePair> query_reporting(Value z, QueryStats* stats = nullptr) const;

  std::size_t n() const noexcept { return n_; }
  std::size_t R() const noexcept { return buckets_.R; }
  const BucketedArrays& buckets() const noexcept { return buckets_; }
  const LinearHash& h1() const noexcept { return h1_; }
  const LinearHash& h2() const noexcept { return h2_; }
  const QuadForest& forest() const noexcept { return *forest_; }
  const ThreeSumParams& params() const noexcept { return params_; }
  std::uint64_t words() const;

 private:
  bool run(Value z, bool all, std::vector<ValuePair>* out, QueryStats* stats) const;

  ThreeSumParams params_;
  std::size_t n_ = 0;
  LinearHash h1_;
  LinearHash h2_;
  BucketedArrays buckets_;
  std::unique_ptr<QuadForest> forest_;
};

ThreeSumIndex ts_build(std::span<const Value> A, std::span<const Value> B, std::size_t X,
                       double eps, std::uint64_t seed, bool si = false);

/// true iff a + b = c for some a in A, b in B, c in C, via |C| index queries.
bool threesum_solve(std::span<const Value> A, std::span<const Value> B, std::span<const Value> C,
                    std::size_t X, double eps, std::uint64_t seed = 1);

/// Random arrays with values in [0, value_range) and query sums, every other
/// one planted as A[a] + B[b].
struct ThreeSumWorkload {
  std::vector<Value> A;
  std::vector<Value> B;
  std::vector<Value> queries;
};
ThreeSumWorkload gen_threesum_workload(std::size_t n, std::uint64_t value_range,
                                       std::size_t queries, std::uint64_t seed);

/// Brute-force references.
std::vector<ValuePair> all_pairs_summing(std::span<const Value> A, std::span<const Value> B,
                                         Value z);

}  // namespace setlab::qt
