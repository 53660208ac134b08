#include <algorithm>
#include <unordered_map>

#include "setlab/si_structures.hpp"

namespace setlab::si {

namespace {

std::uint64_t pair_key(std::size_t a, std::size_t b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

}  // namespace

Alg3Structure Alg3Structure::build(const SetSystem& sys, std::size_t r) {
  Alg3Structure st;
  st.tables_ = SetTables(sys);
  st.r_ = r;

  std::vector<std::uint32_t> freq(static_cast<std::size_t>(sys.u()) + 1, 0);
  for (const auto& s : sys.sets()) {
    for (Elem e : s) ++freq[e];
  }
  std::vector<Elem> order;
  for (Elem e = 1; e <= sys.u(); ++e) {
    if (freq[e] > 0) order.push_back(e);
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](Elem x, Elem y) { return freq[x] > freq[y]; });
  order.resize(std::min(order.size(), r));
  st.heavy_ = order;

  std::vector<char> heavy(freq.size(), 0);
  for (Elem e : st.heavy_) heavy[e] = 1;

  // invert the light part: element -> sets holding it, then emit every pair
  std::vector<std::vector<std::uint32_t>> holders(freq.size());
  for (std::size_t s = 0; s < sys.m(); ++s) {
    for (Elem e : st.tables_.list(s)) {
      if (!heavy[e]) holders[e].push_back(static_cast<std::uint32_t>(s));
    }
  }
  std::unordered_map<std::uint64_t, std::vector<Elem>> residual;
  for (Elem e = 1; e < freq.size(); ++e) {
    const auto& h = holders[e];
    for (std::size_t x = 0; x < h.size(); ++x) {
      for (std::size_t y = x + 1; y < h.size(); ++y) residual[pair_key(h[x], h[y])].push_back(e);
    }
  }
  st.keys_.reserve(residual.size());
  for (const auto& [k, _] : residual) st.keys_.push_back(k);
  std::sort(st.keys_.begin(), st.keys_.end());
  st.offsets_.assign(1, 0);
  for (std::uint64_t k : st.keys_) {
    const auto& list = residual[k];
    st.data_.insert(st.data_.end(), list.begin(), list.end());
    st.offsets_.push_back(static_cast<std::uint32_t>(st.data_.size()));
  }
  return st;
}

std::uint64_t Alg3Structure::dictionary_words() const noexcept {
  return keys_.size() + offsets_.size() + data_.size();
}

std::uint64_t Alg3Structure::words() const {
  return tables_.words() + heavy_.size() + dictionary_words();
}

std::span<const Elem> Alg3Structure::residual(std::size_t i, std::size_t j) const {
  auto [a, b] = zero_based(tables_.m(), i, j);
  if (a == b) return {};
  const auto it = std::lower_bound(keys_.begin(), keys_.end(), pair_key(a, b));
  if (it == keys_.end() || *it != pair_key(a, b)) return {};
  const auto k = static_cast<std::size_t>(it - keys_.begin());
  return std::span<const Elem>(data_).subspan(offsets_[k], offsets_[k + 1] - offsets_[k]);
}

void Alg3Structure::enumerate(std::size_t i, std::size_t j, const ElemVisitor& visit,
                              CostMeter* meter) const {
  auto [a, b] = zero_based(tables_.m(), i, j);
  if (a == b) {
    // the dictionary has no diagonal
    for (Elem e : tables_.list(a)) {
      add_probes(meter, 1);
      if (!visit(e)) return;
    }
    return;
  }
  for (Elem e : heavy_) {
    add_probes(meter, 1);
    if (!tables_.contains(a, e)) continue;
    add_probes(meter, 1);
    if (tables_.contains(b, e) && !visit(e)) return;
  }
  add_probes(meter, 1);
  for (Elem e : residual(i, j)) {
    add_probes(meter, 1);
    if (!visit(e)) return;
  }
}

}  // namespace setlab::si
