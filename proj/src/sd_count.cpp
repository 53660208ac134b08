#include "setlab/si_structures.hpp"

namespace setlab::si {

SdCountStructure SdCountStructure::build(const SetSystem& sys, std::size_t threshold) {
  SdCountStructure st;
  st.tables_ = SetTables(sys);
  st.threshold_ = threshold;
  st.big_slot_.assign(sys.m(), -1);
  std::vector<std::size_t> big;
  for (std::size_t s = 0; s < sys.m(); ++s) {
    if (st.tables_.size_of(s) > threshold) {
      st.big_slot_[s] = static_cast<std::int32_t>(big.size());
      big.push_back(s);
    }
  }
  st.p_ = big.size();
  st.counts_.reserve(TriangularLists::cells(st.p_));
  for (std::size_t t = 0; t < st.p_; ++t) {
    for (std::size_t s = 0; s <= t; ++s) {
      st.counts_.push_back(static_cast<std::uint32_t>(
          merge_intersect_count(st.tables_.list(big[s]), st.tables_.list(big[t]))));
    }
  }
  return st;
}

std::uint64_t SdCountStructure::words() const noexcept {
  // counts are 32-bit, two per word
  return tables_.words() + p_ + (counts_.size() + 1) / 2;
}

std::size_t SdCountStructure::count(std::size_t i, std::size_t j, CostMeter* meter) const {
  auto [a, b] = zero_based(tables_.m(), i, j);
  if (tables_.size_of(a) > tables_.size_of(b)) std::swap(a, b);
  if (big_slot_[a] >= 0) {
    add_probes(meter, 1);
    return counts_[TriangularLists::index(static_cast<std::size_t>(big_slot_[a]),
                                          static_cast<std::size_t>(big_slot_[b]))];
  }
  if (a == b) {
    add_probes(meter, 1);
    return tables_.size_of(a);
  }
  std::size_t n = 0;
  for (Elem e : tables_.list(a)) {
    add_probes(meter, 1);
    if (tables_.contains(b, e)) ++n;
  }
  return n;
}

}  // namespace setlab::si
