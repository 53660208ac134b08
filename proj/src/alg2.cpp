#include <algorithm>
#include <bit>
#include <stdexcept>

#include "setlab/si_structures.hpp"

namespace setlab::si {

Alg2Structure Alg2Structure::build(const SetSystem& sys, std::size_t r) {
  if (r < 1) throw std::invalid_argument("alg2 needs r >= 1");
  Alg2Structure st;
  st.tables_ = SetTables(sys);
  st.r_ = r;
  st.leaf_level_ = std::bit_width(r) - 1;
  if (sys.u() >= 1 && sys.m() > 0) {
    std::vector<std::size_t> all(sys.m());
    for (std::size_t s = 0; s < sys.m(); ++s) all[s] = s;
    st.build_node(0, 1, sys.u(), all);
  }
  return st;
}

int Alg2Structure::build_node(int level, Elem lo, Elem hi,
                              const std::vector<std::size_t>& candidates) {
  Node node;
  node.level = level;
  node.lo = lo;
  node.hi = hi;
  node.threshold = r_ >> level;
  std::vector<std::span<const Elem>> parts;
  for (std::size_t s : candidates) {
    auto part = value_range(tables_.list(s), lo, hi);
    if (part.size() > node.threshold) {
      node.ids.push_back(s);
      node.restricted_size.push_back(static_cast<std::uint32_t>(part.size()));
      node.mass += part.size();
      parts.push_back(part);
    }
  }
  const std::size_t p = node.ids.size();

  if (level == leaf_level_) {
    node.lists = TriangularLists(p);
    for (std::size_t t = 0; t < p; ++t) {
      for (std::size_t s = 0; s <= t; ++s) node.lists.append_cell(merge_intersect(parts[s], parts[t]));
    }
    nodes_.push_back(std::move(node));
    return static_cast<int>(nodes_.size()) - 1;
  }

  node.disjoint_bits.assign((p * p + 63) / 64, 0);
  for (std::size_t s = 0; s < p; ++s) {
    for (std::size_t t = s; t < p; ++t) {
      if (merge_intersect_count(parts[s], parts[t]) != 0) continue;
      for (std::size_t bit : {s * p + t, t * p + s}) node.disjoint_bits[bit / 64] |= 1ull << (bit % 64);
    }
  }

  // frequency-balanced cut: z is the largest prefix with mass at most half
  std::vector<Elem> pool;
  pool.reserve(node.mass);
  for (auto part : parts) pool.insert(pool.end(), part.begin(), part.end());
  std::sort(pool.begin(), pool.end());
  if (!pool.empty()) {
    std::uint64_t prefix = 0;
    std::size_t k = 0;
    while (k < pool.size()) {
      std::size_t run = k;
      while (run < pool.size() && pool[run] == pool[k]) ++run;
      if ((prefix + (run - k)) * 2 > node.mass) break;
      prefix += run - k;
      k = run;
    }
    node.kept = pool[k];
  }

  const std::optional<Elem> kept = node.kept;
  const std::vector<std::size_t> ids = node.ids;
  nodes_.push_back(std::move(node));
  const int idx = static_cast<int>(nodes_.size()) - 1;
  if (!kept) return idx;
  if (*kept > lo) {
    const int left = build_node(level + 1, lo, *kept - 1, ids);
    nodes_[static_cast<std::size_t>(idx)].left = left;
  }
  if (*kept < hi) {
    const int right = build_node(level + 1, *kept + 1, hi, ids);
    nodes_[static_cast<std::size_t>(idx)].right = right;
  }
  return idx;
}

std::uint64_t Alg2Structure::words() const {
  std::uint64_t w = tables_.words();
  for (const Node& n : nodes_) {
    w += 6 + n.ids.size() + n.restricted_size.size() + n.disjoint_bits.size();
    if (n.level == leaf_level_) w += n.lists.words();
  }
  return w;
}

bool Alg2Structure::scan(std::span<const Elem> small, std::size_t other, const ElemVisitor& visit,
                         CostMeter* meter) const {
  for (Elem e : small) {
    add_probes(meter, 1);
    if (tables_.contains(other, e) && !visit(e)) return false;
  }
  return true;
}

bool Alg2Structure::visit_node(int index, std::size_t a, std::size_t b, const ElemVisitor& visit,
                               CostMeter* meter) const {
  const Node& node = nodes_[static_cast<std::size_t>(index)];
  const auto ra = restricted(node, a);
  const auto rb = restricted(node, b);
  add_probes(meter, 2);
  if (ra.size() <= node.threshold || rb.size() <= node.threshold) {
    // stopper
    return ra.size() <= rb.size() ? scan(ra, b, visit, meter) : scan(rb, a, visit, meter);
  }
  const auto pos = [&](std::size_t s) {
    return static_cast<std::size_t>(std::lower_bound(node.ids.begin(), node.ids.end(), s) -
                                    node.ids.begin());
  };
  const std::size_t pa = pos(a);
  const std::size_t pb = pos(b);
  add_probes(meter, 1);
  if (node.level == leaf_level_) {
    for (Elem e : node.lists.cell(pa, pb)) {
      add_probes(meter, 1);
      if (!visit(e)) return false;
    }
    return true;
  }
  const std::size_t bit = pa * node.ids.size() + pb;
  add_probes(meter, 1);
  if ((node.disjoint_bits[bit / 64] >> (bit % 64)) & 1) return true;
  if (node.left >= 0 && !visit_node(node.left, a, b, visit, meter)) return false;
  if (node.kept) {
    add_probes(meter, 2);
    if (tables_.contains(a, *node.kept) && tables_.contains(b, *node.kept) && !visit(*node.kept)) {
      return false;
    }
  }
  if (node.right >= 0 && !visit_node(node.right, a, b, visit, meter)) return false;
  return true;
}

void Alg2Structure::enumerate(std::size_t i, std::size_t j, const ElemVisitor& visit,
                              CostMeter* meter) const {
  auto [a, b] = zero_based(tables_.m(), i, j);
  if (nodes_.empty()) {
    if (tables_.size_of(a) > tables_.size_of(b)) std::swap(a, b);
    scan(tables_.list(a), b, visit, meter);
    return;
  }
  visit_node(0, a, b, visit, meter);
}

}  // namespace setlab::si
