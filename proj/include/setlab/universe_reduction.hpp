#pragma once

// Reduction of SetDisjointness / SetIntersection on an arbitrary instance to
// inner instances over a universe of size 8u: sets are split into large,
// medium and small classes, large-set answers go into a matrix, and medium
// sets are hashed by a verified battery of hash functions.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "setlab/core.hpp"
#include "setlab/membership.hpp"

namespace setlab::ur {

enum class Mode { SD, SI };

Mode parse_mode(const std::string& s);
const char* to_string(Mode mode);

enum class SizeClass : std::uint8_t { Small, Medium, Large };

struct SizeClassification {
  Mode mode = Mode::SD;
  std::vector<std::size_t> large_ids;   // 1-based, ascending; position is p(.)
  std::vector<std::size_t> medium_ids;  // 1-based, ascending; position is q(.)
  std::vector<std::size_t> small_ids;
  std::size_t large_min = 0;  // large iff |S| >= large_min
  std::size_t small_max = 0;  // small iff |S| <= small_max
  std::vector<SizeClass> of;  // per set, 0-based
  std::vector<std::int32_t> order;  // per set: p(.) or q(.), -1 for small

  std::size_t d() const noexcept { return large_ids.size(); }
  std::size_t e() const noexcept { return medium_ids.size(); }
};

/// SD: large iff |S| > sqrt(u), small iff |S| <= u^(1/2-eps).
/// SI: large iff |S| >= u^(alpha-3eps/4), small iff |S| <= u^(alpha-eps).
SizeClassification classify(const SetSystem& sys, std::uint32_t u, double eps, Mode mode,
                            double alpha = 1.0);

/// h(x) = ((a*x + b) mod (2^61-1)) mod range, shifted into 1..range.
struct UniversalHash {
  std::uint64_t a = 1;
  std::uint64_t b = 0;
  std::uint64_t range = 1;

  Elem operator()(Elem x) const noexcept;
};

struct HashBattery {
  std::vector<UniversalHash> functions;
  std::size_t rounds_used = 0;
  std::uint64_t range = 0;

  std::size_t k() const noexcept { return functions.size(); }
};

class BatteryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Number of hashed values of S_i ∩ S_j under h that no common element maps to.
std::size_t false_collisions(std::span<const Elem> a, std::span<const Elem> b,
                             const UniversalHash& h);

/// For every medium pair that must be separated (disjoint pairs in SD mode,
/// all pairs in SI mode) some function keeps false collisions at most B.
bool battery_ok(const SetSystem& sys, const SizeClassification& cls, const HashBattery& battery,
                std::size_t budget);

/// Redraws the whole battery until battery_ok; throws BatteryError after
/// max_rounds failures.
HashBattery select_hash_battery(const SetSystem& sys, const SizeClassification& cls,
                                std::uint32_t u, std::size_t budget, std::size_t max_rounds,
                                std::uint64_t seed);

/// ceil(log2(max(N, m, 2)))
std::size_t battery_size(const SetSystem& sys);

/// Builds an inner structure over a set system on universe 8u.
using InnerBuilder = std::function<std::unique_ptr<IntersectionIndex>(const SetSystem&)>;

InnerBuilder oracle_builder();
/// Algorithm 1 with r = floor(sqrt(N')) of the hashed instance.
InnerBuilder alg1_builder();
/// "oracle" or "alg1".
InnerBuilder inner_builder(const std::string& name);

struct ReductionParams {
  std::uint32_t u = 0;
  double eps = 0.25;
  Mode mode = Mode::SD;
  double alpha = 1.0;
  /// Defaults to 0 in SD mode and floor(u^(2alpha-1-3eps/2)) in SI mode.
  std::optional<std::size_t> false_positive_budget;
  std::size_t max_rounds = 10;
  std::uint64_t seed = 1;
};

std::size_t default_budget(const ReductionParams& params);

class ReducedStructure {
 public:
  static ReducedStructure build(const SetSystem& sys, const ReductionParams& params,
                                const InnerBuilder& inner);

  /// SD mode answers the disjointness bit only (elements stay empty).
  QueryResult query(std::size_t i, std::size_t j, CostMeter* meter = nullptr) const;
  bool disjoint(std::size_t i, std::size_t j, CostMeter* meter = nullptr) const;

  const SizeClassification& classification() const noexcept { return cls_; }
  const HashBattery& battery() const noexcept { return battery_; }
  std::size_t false_positive_budget() const noexcept { return budget_; }
  std::size_t inner_count() const noexcept { return inner_.size(); }
  /// Medium sets imaged under h_k, in medium order.
  const SetSystem& hashed(std::size_t k) const { return hashed_.at(k); }
  std::uint64_t inner_universe() const noexcept { return battery_.range; }
  /// SD mode: matrix bit (true = disjoint). Rows are large positions, columns
  /// are large positions followed by d + medium positions.
  bool matrix_disjoint(std::size_t row, std::size_t col) const;
  /// SI mode: stored list.
  std::span<const Elem> matrix_list(std::size_t row, std::size_t col) const;
  std::uint64_t words() const;
  /// `d e k rounds inner_universe`
  std::string summary() const;

 private:
  std::size_t column(std::size_t s) const;
  bool both_medium(std::size_t a, std::size_t b, CostMeter* meter,
                   std::vector<Elem>* out) const;

  SizeClassification cls_;
  SetTables tables_;
  std::size_t budget_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::uint64_t> bits_;
  std::vector<std::uint32_t> offsets_;
  std::vector<Elem> lists_;
  HashBattery battery_;
  std::vector<SetSystem> hashed_;
  std::vector<std::unique_ptr<IntersectionIndex>> inner_;
  // per function, per medium set: (hash, element) sorted
  std::vector<std::vector<std::vector<std::pair<Elem, Elem>>>> preimages_;
};

}  // namespace setlab::ur
