#pragma once

// Instance model shared by every structure and reduction: set systems over a
// 1-based universe, query results, cost accounting, seeded generators and the
// brute-force intersection oracle.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace setlab {

using Elem = std::uint32_t;

/// Raised for invalid instances, both when constructing a SetSystem in memory
/// and when parsing an instance file.
class InstanceError : public std::runtime_error {
 public:
  enum class Kind {
    MalformedHeader,
    MalformedLine,
    MissingLines,
    ElementOutOfRange,
    Unsorted,
    Generator,
  };

  InstanceError(Kind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

/// Immutable collection S_1..S_m of strictly increasing element lists drawn
/// from 1..u. Set indices in the public API are 1-based.
class SetSystem {
 public:
  SetSystem() = default;
  SetSystem(std::uint32_t universe, std::vector<std::vector<Elem>> sets);

  std::size_t m() const noexcept { return sets_.size(); }
  std::uint32_t u() const noexcept { return universe_; }
  /// N, the total number of elements over all sets.
  std::size_t total() const noexcept { return total_; }
  std::size_t max_set_size() const noexcept { return max_size_; }

  /// S_i for 1 <= i <= m.
  std::span<const Elem> set(std::size_t i) const;
  std::size_t size_of(std::size_t i) const { return set(i).size(); }
  const std::vector<std::vector<Elem>>& sets() const noexcept { return sets_; }

  bool operator==(const SetSystem& other) const {
    return universe_ == other.universe_ && sets_ == other.sets_;
  }

 private:
  std::uint32_t universe_ = 0;
  std::vector<std::vector<Elem>> sets_;
  std::size_t total_ = 0;
  std::size_t max_size_ = 0;
};

/// Throws std::out_of_range unless 1 <= i <= m.
void check_set_index(const SetSystem& sys, std::size_t i);

struct QueryResult {
  bool disjoint = true;
  std::vector<Elem> elements;

  std::size_t out() const noexcept { return elements.size(); }

  static QueryResult of(std::vector<Elem> elements) {
    QueryResult r;
    r.disjoint = elements.empty();
    r.elements = std::move(elements);
    return r;
  }

  bool operator==(const QueryResult&) const = default;
};

/// Machine-independent cost counters. `words` is the retained payload of a
/// built structure (64-bit words); `probes` counts element comparisons and
/// table lookups of the current query; `queries_issued` counts inner-structure
/// queries made by reductions during the current query.
struct CostMeter {
  std::uint64_t words = 0;
  std::uint64_t probes = 0;
  std::uint64_t queries_issued = 0;

  void begin_query() noexcept {
    probes = 0;
    queries_issued = 0;
  }
};

inline void add_probes(CostMeter* meter, std::uint64_t n) {
  if (meter != nullptr) meter->probes += n;
}

/// Visitor for streamed intersection output. Returning false stops the
/// enumeration.
using ElemVisitor = std::function<bool(Elem)>;

/// Common query surface of every SetIntersection structure, so reductions and
/// the verifier can be driven by any of them.
class IntersectionIndex {
 public:
  virtual ~IntersectionIndex() = default;

  virtual std::size_t set_count() const = 0;
  virtual std::uint64_t words() const = 0;
  /// Streams S_i ∩ S_j (1-based ids) to `visit`, in no particular order.
  virtual void enumerate(std::size_t i, std::size_t j, const ElemVisitor& visit,
                         CostMeter* meter) const = 0;

  /// Full sorted answer. Resets the meter's per-query counters first.
  QueryResult query(std::size_t i, std::size_t j, CostMeter* meter = nullptr) const;
  /// Stops at the first common element.
  bool disjoint(std::size_t i, std::size_t j, CostMeter* meter = nullptr) const;
};

/// Deterministic RNG. Bounded draws use rejection sampling over the raw
/// mt19937_64 stream so outputs do not depend on the standard library's
/// distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform in [0, bound). bound must be positive.
  std::uint64_t below(std::uint64_t bound);
  /// Uniform in [lo, hi].
  std::int64_t between(std::int64_t lo, std::int64_t hi);
  /// Uniform in [0, 1).
  double unit();

 private:
  std::mt19937_64 engine_;
};

// -- generators -------------------------------------------------------------

/// Draws (set, element) pairs i.i.d. uniformly and deduplicates until exactly
/// target_n distinct memberships exist.
SetSystem gen_random_instance(std::size_t m, std::uint32_t u, std::size_t target_n,
                              std::uint64_t seed);

struct SkewedParams {
  std::size_t m = 0;
  std::uint32_t u = 0;
  std::size_t target_n = 0;
  /// Set k (1-based) gets weight k^-size_exponent of the total mass.
  double size_exponent = 1.0;
  /// Elements are drawn from a Zipf law with this exponent over a random
  /// relabelling of the universe.
  double element_exponent = 1.0;
  std::uint64_t seed = 0;
};

/// Power-law set sizes with Zipf element popularity. Used for the space/time
/// tradeoff sweeps, where uniform instances have a single size class and no
/// frequency skew to trade against.
SetSystem gen_skewed_instance(const SkewedParams& params);

// -- oracle -----------------------------------------------------------------

/// S_i ∩ S_j by a linear merge of the two sorted lists.
QueryResult oracle_intersect(const SetSystem& sys, std::size_t i, std::size_t j);

/// Sorted-merge intersection of two sorted ranges.
std::vector<Elem> merge_intersect(std::span<const Elem> a, std::span<const Elem> b);
std::size_t merge_intersect_count(std::span<const Elem> a, std::span<const Elem> b);

/// Oracle wrapped as an index, for reductions that take an injected inner
/// structure.
class OracleIndex final : public IntersectionIndex {
 public:
  explicit OracleIndex(SetSystem sys) : sys_(std::move(sys)) {}

  std::size_t set_count() const override { return sys_.m(); }
  std::uint64_t words() const override;
  void enumerate(std::size_t i, std::size_t j, const ElemVisitor& visit,
                 CostMeter* meter) const override;

 private:
  SetSystem sys_;
};

// -- instance and query files -------------------------------------------------

/// Line-oriented text: header `m u`, then one line per set holding its sorted
/// elements separated by spaces (an empty line is an empty set).
void write_instance(std::ostream& os, const SetSystem& sys);
SetSystem read_instance(std::istream& is);
void save_instance(const SetSystem& sys, const std::string& path);
SetSystem load_instance(const std::string& path);

using QueryPair = std::pair<std::size_t, std::size_t>;

/// Query file: one `i j` pair per line, 1-based.
void write_pairs(std::ostream& os, std::span<const QueryPair> pairs);
std::vector<QueryPair> read_pairs(std::istream& is);
std::vector<QueryPair> load_pairs(const std::string& path);

/// All m^2 ordered pairs, row-major.
std::vector<QueryPair> all_pairs(std::size_t m);
/// `count` pairs drawn uniformly with replacement.
std::vector<QueryPair> random_pairs(std::size_t m, std::size_t count, std::uint64_t seed);

}  // namespace setlab
