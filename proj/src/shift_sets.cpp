#include <cmath>
#include <stdexcept>

#include "setlab/quadtree.hpp"

namespace setlab::qt {

namespace {

std::size_t ceil_sqrt(std::size_t x) {
  auto r = static_cast<std::size_t>(std::sqrt(static_cast<double>(x)));
  while (r * r > x) --r;
  while (r * r < x) ++r;
  return r;
}

std::vector<Pos> ones_of(const std::vector<std::uint8_t>& v) {
  std::vector<Pos> out;
  for (std::size_t p = 0; p < v.size(); ++p) {
    if (v[p]) out.push_back(static_cast<Pos>(p));
  }
  return out;
}

}  // namespace

ShiftSetInstance::ShiftSetInstance(std::size_t Z) : Z_(Z), q_(ceil_sqrt(Z)) {
  if (Z < 1) throw std::invalid_argument("shift sets need Z >= 1");
  b_shifts_ = (2 * Z - 2) / q_ + 1;
}

std::size_t ShiftSetInstance::add_a(std::span<const Pos> ones) {
  const std::size_t first = sets_.size();
  for (std::size_t s = 0; s < q_; ++s) {
    std::vector<Elem> set;
    set.reserve(ones.size());
    // reversal makes positions descend; walk ones backwards to keep the set sorted
    for (auto it = ones.rbegin(); it != ones.rend(); ++it) {
      set.push_back(static_cast<Elem>(Z_ - 1 - *it + s + 1));
    }
    sets_.push_back(std::move(set));
  }
  return first;
}

std::size_t ShiftSetInstance::add_b(std::span<const Pos> ones) {
  const std::size_t first = sets_.size();
  for (std::size_t t = 0; t < b_shifts_; ++t) {
    const auto shift = static_cast<std::int64_t>(Z_) - 1 - static_cast<std::int64_t>(t * q_);
    std::vector<Elem> set;
    for (Pos p : ones) {
      const std::int64_t pos = static_cast<std::int64_t>(p) + shift;
      if (pos >= 0) set.push_back(static_cast<Elem>(pos + 1));
    }
    sets_.push_back(std::move(set));
  }
  return first;
}

std::pair<std::size_t, std::size_t> ShiftSetInstance::sets_for(std::size_t a_first,
                                                               std::size_t b_first,
                                                               std::size_t j) const {
  if (j > 2 * Z_ - 2) throw std::out_of_range("convolution index outside 0..2Z-2");
  return {a_first + j % q_ + 1, b_first + j / q_ + 1};
}

std::pair<Pos, Pos> ShiftSetInstance::decode(std::size_t j, Elem common) const {
  // common - 1 = Z-1-p+s with s = j mod q
  const std::size_t s = j % q_;
  const auto p = static_cast<Pos>(Z_ - 1 + s - (common - 1));
  return {p, static_cast<Pos>(j - p)};
}

SetSystem ShiftSetInstance::system() const { return SetSystem(universe(), sets_); }

ShiftSetInstance build_shift_sets(const std::vector<std::vector<std::uint8_t>>& a_subvectors,
                                  const std::vector<std::vector<std::uint8_t>>& b_subvectors,
                                  std::size_t Z) {
  ShiftSetInstance inst(Z);
  for (const auto& v : a_subvectors) {
    if (v.size() != Z) throw std::invalid_argument("A-side sub-vector length differs from Z");
    inst.add_a(ones_of(v));
  }
  for (const auto& w : b_subvectors) {
    if (w.size() != Z) throw std::invalid_argument("B-side sub-vector length differs from Z");
    inst.add_b(ones_of(w));
  }
  return inst;
}

bool conv_position_nonzero(const ShiftSetInstance& inst, std::size_t a_first,
                           std::size_t b_first, std::size_t j, const SdQuery& disjoint) {
  const auto [sa, sb] = inst.sets_for(a_first, b_first, j);
  return !disjoint(sa, sb);
}

}  // namespace setlab::qt
