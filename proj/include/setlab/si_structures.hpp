#pragma once

// SetIntersection structures on the S·T = O(N^2) tradeoff curve, the
// intersection-size structure with the S·T^2 = O(N^2) tradeoff, and the
// hybrid dispatcher combining a sizer with a reporter.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "setlab/core.hpp"
#include "setlab/membership.hpp"

namespace setlab::si {

/// Threshold structure: every pair of sets larger than r gets its full
/// intersection list stored; any other pair is answered by scanning the
/// smaller set against the other's table.
class Alg1Structure final : public IntersectionIndex {
 public:
  static Alg1Structure build(const SetSystem& sys, std::size_t r);

  std::size_t set_count() const override { return tables_.m(); }
  std::uint64_t words() const override;
  void enumerate(std::size_t i, std::size_t j, const ElemVisitor& visit,
                 CostMeter* meter) const override;

  std::size_t r() const noexcept { return r_; }
  /// 1-based ids of the sets with more than r elements, ascending.
  std::vector<std::size_t> big_ids() const;
  /// Stored list for two big sets (1-based ids). Throws if either is small.
  std::span<const Elem> stored(std::size_t i, std::size_t j) const;
  std::uint64_t matrix_words() const noexcept { return matrix_.words(); }
  const SetTables& tables() const noexcept { return tables_; }

 private:
  SetTables tables_;
  std::size_t r_ = 0;
  std::vector<std::size_t> big_;        // 0-based ids
  std::vector<std::int32_t> big_slot_;  // per set: row in matrix or -1
  TriangularLists matrix_;
};

/// Frequency-split binary tree. Each node keeps a disjointness bit-matrix over
/// its sets that still exceed the level threshold r/2^level, one kept element,
/// and splits the remaining element mass in half between its children. The
/// bottom level stores full intersection lists.
class Alg2Structure final : public IntersectionIndex {
 public:
  struct Node {
    int level = 0;
    Elem lo = 0;  // value range handled, inclusive
    Elem hi = 0;
    std::size_t threshold = 0;
    std::vector<std::size_t> ids;   // sets exceeding the threshold, 0-based, ascending
    std::vector<std::uint32_t> restricted_size;
    std::uint64_t mass = 0;         // total restricted size over ids
    std::vector<std::uint64_t> disjoint_bits;  // row-major ids x ids, inner nodes
    TriangularLists lists;                     // leaves
    std::optional<Elem> kept;
    int left = -1;
    int right = -1;
  };

  static Alg2Structure build(const SetSystem& sys, std::size_t r);

  std::size_t set_count() const override { return tables_.m(); }
  std::uint64_t words() const override;
  void enumerate(std::size_t i, std::size_t j, const ElemVisitor& visit,
                 CostMeter* meter) const override;

  std::size_t r() const noexcept { return r_; }
  int leaf_level() const noexcept { return leaf_level_; }
  std::span<const Node> nodes() const noexcept { return nodes_; }
  /// Elements of set s (0-based) inside node's value range.
  std::span<const Elem> restricted(const Node& node, std::size_t s) const {
    return value_range(tables_.list(s), node.lo, node.hi);
  }

 private:
  int build_node(int level, Elem lo, Elem hi, const std::vector<std::size_t>& candidates);
  bool visit_node(int node, std::size_t a, std::size_t b, const ElemVisitor& visit,
                  CostMeter* meter) const;
  bool scan(std::span<const Elem> small, std::size_t other, const ElemVisitor& visit,
            CostMeter* meter) const;

  SetTables tables_;
  std::size_t r_ = 1;
  int leaf_level_ = 0;
  std::vector<Node> nodes_;
};

/// Heavy-hitter structure: the r most frequent elements are checked against
/// both tables at query time; every other common element is stored per pair.
class Alg3Structure final : public IntersectionIndex {
 public:
  static Alg3Structure build(const SetSystem& sys, std::size_t r);

  std::size_t set_count() const override { return tables_.m(); }
  std::uint64_t words() const override;
  void enumerate(std::size_t i, std::size_t j, const ElemVisitor& visit,
                 CostMeter* meter) const override;

  std::size_t r() const noexcept { return r_; }
  /// Heavy hitters in descending frequency, ties by smaller element.
  std::span<const Elem> heavy() const noexcept { return heavy_; }
  std::size_t dictionary_entries() const noexcept { return keys_.size(); }
  /// Stored residual S_i ∩ S_j \ L for i != j, empty when absent.
  std::span<const Elem> residual(std::size_t i, std::size_t j) const;
  std::uint64_t dictionary_words() const noexcept;

 private:
  SetTables tables_;
  std::size_t r_ = 0;
  std::vector<Elem> heavy_;
  std::vector<std::uint64_t> keys_;  // (min << 32) | max, 0-based ids, sorted
  std::vector<std::uint32_t> offsets_;
  std::vector<Elem> data_;
};

/// Intersection sizes: exact counts stored for pairs of sets larger than T,
/// a counting scan otherwise.
class SdCountStructure {
 public:
  static SdCountStructure build(const SetSystem& sys, std::size_t threshold);

  std::size_t count(std::size_t i, std::size_t j, CostMeter* meter = nullptr) const;
  bool disjoint(std::size_t i, std::size_t j, CostMeter* meter = nullptr) const {
    return count(i, j, meter) == 0;
  }
  std::size_t set_count() const noexcept { return tables_.m(); }
  std::size_t threshold() const noexcept { return threshold_; }
  std::uint64_t words() const noexcept;

 private:
  SetTables tables_;
  std::size_t threshold_ = 0;
  std::vector<std::int32_t> big_slot_;
  std::size_t p_ = 0;
  std::vector<std::uint32_t> counts_;  // upper triangle
};

enum class HybridPath { Empty, SmallOutput, LargeOutput };

const char* to_string(HybridPath path);

struct HybridOptions {
  /// Output size below which the small-output path serves the query. When
  /// unset it is derived from the budget as N^(t/(1-t)) with S = N^(2-2t).
  std::optional<double> threshold;
};

/// Fixed space budget split between an intersection-size structure (the
/// sizer) and a threshold reporter. Each query asks the sizer first and then
/// picks a path by output size.
class HybridStructure final : public IntersectionIndex {
 public:
  static HybridStructure build(const SetSystem& sys, std::uint64_t space_budget,
                               const HybridOptions& options = {});
  /// Smallest budget build() accepts for this instance.
  static std::uint64_t minimum_budget(const SetSystem& sys);

  std::size_t set_count() const override { return sizer_.set_count(); }
  std::uint64_t words() const override;
  void enumerate(std::size_t i, std::size_t j, const ElemVisitor& visit,
                 CostMeter* meter) const override;

  /// Full answer plus the path that served it. `force` overrides dispatch
  /// for non-empty outputs.
  QueryResult query_traced(std::size_t i, std::size_t j, CostMeter* meter, HybridPath* served,
                           std::optional<HybridPath> force = std::nullopt) const;

  std::uint64_t budget() const noexcept { return budget_; }
  double t() const noexcept { return t_; }
  double threshold() const noexcept { return threshold_; }
  const SdCountStructure& sizer() const noexcept { return sizer_; }
  const Alg1Structure& reporter() const noexcept { return *reporter_; }

 private:
  HybridPath dispatch(std::size_t a, std::size_t b, std::size_t count,
                      std::optional<HybridPath> force) const;
  void serve(HybridPath path, std::size_t a, std::size_t b, const ElemVisitor& visit,
             CostMeter* meter) const;

 private:
  std::uint64_t budget_ = 0;
  double t_ = 0;
  double threshold_ = 0;
  SdCountStructure sizer_;
  std::unique_ptr<Alg1Structure> reporter_;
};

}  // namespace setlab::si
