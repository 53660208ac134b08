#include "setlab/membership.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>
#include <string>

namespace setlab {

namespace {

constexpr std::uint64_t kFibonacci = 0x9E3779B97F4A7C15ull;

}  // namespace

MembershipTable::MembershipTable(std::span<const Elem> elements) {
  if (elements.empty()) return;
  const std::size_t cap = std::bit_ceil(2 * elements.size());
  slots_.assign(cap, 0);
  shift_ = 64 - static_cast<unsigned>(std::countr_zero(cap));
  const std::size_t mask = cap - 1;
  for (Elem e : elements) {
    std::size_t h = cap == 1 ? 0 : static_cast<std::size_t>((e * kFibonacci) >> shift_);
    while (slots_[h] != 0 && slots_[h] != e) h = (h + 1) & mask;
    slots_[h] = e;
  }
}

bool MembershipTable::contains(Elem e) const noexcept {
  if (slots_.empty() || e == 0) return false;
  const std::size_t cap = slots_.size();
  const std::size_t mask = cap - 1;
  std::size_t h = cap == 1 ? 0 : static_cast<std::size_t>((e * kFibonacci) >> shift_);
  while (slots_[h] != 0) {
    if (slots_[h] == e) return true;
    h = (h + 1) & mask;
  }
  return false;
}

SetTables::SetTables(const SetSystem& sys) : lists_(sys.sets()) {
  tables_.reserve(lists_.size());
  for (const auto& s : lists_) {
    tables_.emplace_back(s);
    total_ += s.size();
    words_ += s.size() + tables_.back().words();
  }
}

std::pair<std::size_t, std::size_t> zero_based(std::size_t m, std::size_t i, std::size_t j) {
  for (std::size_t id : {i, j}) {
    if (id < 1 || id > m) {
      throw std::out_of_range("set index " + std::to_string(id) + " outside 1.." +
                              std::to_string(m));
    }
  }
  return {i - 1, j - 1};
}

std::span<const Elem> value_range(std::span<const Elem> list, Elem lo, Elem hi) {
  const auto first = std::lower_bound(list.begin(), list.end(), lo);
  const auto last = std::upper_bound(first, list.end(), hi);
  return list.subspan(static_cast<std::size_t>(first - list.begin()),
                      static_cast<std::size_t>(last - first));
}

void TriangularLists::append_cell(std::span<const Elem> elements) {
  if (filled_ >= cells(p_)) throw std::logic_error("TriangularLists: all cells filled");
  data_.insert(data_.end(), elements.begin(), elements.end());
  offsets_[++filled_] = static_cast<std::uint32_t>(data_.size());
}

std::span<const Elem> TriangularLists::cell(std::size_t s, std::size_t t) const {
  const std::size_t k = index(s, t);
  return std::span<const Elem>(data_).subspan(offsets_[k], offsets_[k + 1] - offsets_[k]);
}

}  // namespace setlab
