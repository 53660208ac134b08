#include <stdexcept>

#include "setlab/si_structures.hpp"

namespace setlab::si {

Alg1Structure Alg1Structure::build(const SetSystem& sys, std::size_t r) {
  Alg1Structure st;
  st.tables_ = SetTables(sys);
  st.r_ = r;
  st.big_slot_.assign(sys.m(), -1);
  for (std::size_t s = 0; s < sys.m(); ++s) {
    if (st.tables_.size_of(s) > r) {
      st.big_slot_[s] = static_cast<std::int32_t>(st.big_.size());
      st.big_.push_back(s);
    }
  }
  const std::size_t p = st.big_.size();
  st.matrix_ = TriangularLists(p);
  for (std::size_t t = 0; t < p; ++t) {
    for (std::size_t s = 0; s <= t; ++s) {
      st.matrix_.append_cell(
          merge_intersect(st.tables_.list(st.big_[s]), st.tables_.list(st.big_[t])));
    }
  }
  return st;
}

std::uint64_t Alg1Structure::words() const {
  return tables_.words() + big_.size() + matrix_.words();
}

std::vector<std::size_t> Alg1Structure::big_ids() const {
  std::vector<std::size_t> out;
  out.reserve(big_.size());
  for (std::size_t s : big_) out.push_back(s + 1);
  return out;
}

std::span<const Elem> Alg1Structure::stored(std::size_t i, std::size_t j) const {
  auto [a, b] = zero_based(tables_.m(), i, j);
  if (big_slot_[a] < 0 || big_slot_[b] < 0) {
    throw std::invalid_argument("stored: both sets must exceed r");
  }
  return matrix_.cell(static_cast<std::size_t>(big_slot_[a]),
                      static_cast<std::size_t>(big_slot_[b]));
}

void Alg1Structure::enumerate(std::size_t i, std::size_t j, const ElemVisitor& visit,
                              CostMeter* meter) const {
  auto [a, b] = zero_based(tables_.m(), i, j);
  if (tables_.size_of(a) > tables_.size_of(b)) std::swap(a, b);
  if (big_slot_[a] >= 0) {
    // both big
    add_probes(meter, 1);
    for (Elem e : matrix_.cell(static_cast<std::size_t>(big_slot_[a]),
                               static_cast<std::size_t>(big_slot_[b]))) {
      add_probes(meter, 1);
      if (!visit(e)) return;
    }
    return;
  }
  for (Elem e : tables_.list(a)) {
    add_probes(meter, 1);
    if (tables_.contains(b, e) && !visit(e)) return;
  }
}

}  // namespace setlab::si
