#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "setlab/core.hpp"

namespace setlab {

/// Static open-addressing membership table for one set. Capacity is the next
/// power of two at or above twice the set size, so a lookup touches O(1)
/// slots in expectation. Slot value 0 marks an empty slot (elements are >= 1).
class MembershipTable {
 public:
  MembershipTable() = default;
  explicit MembershipTable(std::span<const Elem> elements);

  bool contains(Elem e) const noexcept;
  std::size_t capacity() const noexcept { return slots_.size(); }
  std::uint64_t words() const noexcept { return slots_.size(); }

 private:
  std::vector<Elem> slots_;
  unsigned shift_ = 64;
};

/// The per-set tables T_1..T_m every structure keeps, together with the sorted
/// element lists used for small-set scans.
class SetTables {
 public:
  SetTables() = default;
  explicit SetTables(const SetSystem& sys);

  std::size_t m() const noexcept { return lists_.size(); }
  std::size_t total() const noexcept { return total_; }
  /// 0-based access.
  std::span<const Elem> list(std::size_t s) const { return lists_[s]; }
  std::size_t size_of(std::size_t s) const { return lists_[s].size(); }
  bool contains(std::size_t s, Elem e) const noexcept { return tables_[s].contains(e); }

  /// Sorted list length plus table slots.
  std::uint64_t words() const noexcept { return words_; }

 private:
  std::vector<std::vector<Elem>> lists_;
  std::vector<MembershipTable> tables_;
  std::size_t total_ = 0;
  std::uint64_t words_ = 0;
};

/// Converts a 1-based pair to 0-based after range-checking both ids.
std::pair<std::size_t, std::size_t> zero_based(std::size_t m, std::size_t i, std::size_t j);

/// Sub-range of a sorted list with values in [lo, hi].
std::span<const Elem> value_range(std::span<const Elem> list, Elem lo, Elem hi);

/// Upper-triangular store of element lists indexed by (s, t), s <= t, in CSR
/// form. Used for intersection matrices.
class TriangularLists {
 public:
  TriangularLists() = default;
  explicit TriangularLists(std::size_t p) : p_(p), offsets_(cells(p) + 1, 0) {}

  static std::size_t cells(std::size_t p) { return p * (p + 1) / 2; }
  static std::size_t index(std::size_t s, std::size_t t) {
    if (s > t) std::swap(s, t);
    return t * (t + 1) / 2 + s;
  }

  std::size_t dim() const noexcept { return p_; }
  /// Cells must be filled in index order.
  void append_cell(std::span<const Elem> elements);
  std::span<const Elem> cell(std::size_t s, std::size_t t) const;
  std::size_t element_count() const noexcept { return data_.size(); }
  std::uint64_t words() const noexcept { return offsets_.size() + data_.size(); }

 private:
  std::size_t p_ = 0;
  std::size_t filled_ = 0;
  std::vector<std::uint32_t> offsets_;
  std::vector<Elem> data_;
};

}  // namespace setlab
